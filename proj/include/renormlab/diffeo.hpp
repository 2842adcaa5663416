#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "renormlab/interval.hpp"

namespace renormlab {

/// Orientation-preserving diffeomorphism of [0,1] (or of an interval, for chains).
class Diffeo {
public:
    virtual ~Diffeo() = default;
    virtual double value(double x) const = 0;
    virtual double deriv(double x) const = 0;
    virtual double inverse(double y) const = 0;
    /// N = D log D. Throws InvalidArgument where no closed form exists.
    virtual double nonlinearity(double x) const;
    virtual double nonlinearity_deriv(double x) const;

    double operator()(double x) const { return value(x); }
};

using DiffeoPtr = std::shared_ptr<const Diffeo>;

/// mu_s(x) = ((1 + r x)^alpha - 1) / ((1 + r)^alpha - 1), r = exp(s/(alpha-1)) - 1.
class PureMap final : public Diffeo {
public:
    static constexpr double kSmallS = 1e-9;

    PureMap(double alpha, double s);
    static PureMap identity(double alpha) { return PureMap(alpha, 0.0); }
    /// Z(x|x|^{alpha-1}; [a,b]) for a < b of the same strict sign.
    static PureMap from_power_interval(double alpha, double a, double b);
    /// Same, given the left end a != 0 and the width w = b - a > 0 separately.
    static PureMap from_power_interval_width(double alpha, double a, double w);

    double alpha() const { return alpha_; }
    double s() const { return s_; }
    double r() const { return r_; }
    bool is_identity() const { return s_ == 0.0; }

    double value(double x) const override;
    double deriv(double x) const override;
    double inverse(double y) const override;
    double nonlinearity(double x) const override;
    double nonlinearity_deriv(double x) const override;
    double schwarzian(double x) const;

    /// sup_{[0,1]} |N mu_s| = (alpha-1)(exp(|s|/(alpha-1)) - 1).
    double norm() const;
    double distortion() const { return s_ < 0 ? -s_ : s_; }
    /// Image of [lo,hi] and its width, computed without cancellation.
    double image_width(double lo, double width) const;
    PureMap zoom(const Interval& I) const;
    /// Zoom on [lo, lo + width].
    PureMap zoom_lw(double lo, double width) const;

private:
    double alpha_;
    double s_;
    double r_;
    double denom_;  // (1+r)^alpha - 1
    double ek_;     // 1 + r
    bool small_;
    // 1 + r x, written as (1-x) + x(1+r) away from small r x so that r -> -1 keeps full precision
    double base(double x) const;
    double log_base(double x) const;
};

PureMap make_pure(double alpha, double s);
double pure_eval(const PureMap& m, double x);
double pure_nonlinearity(const PureMap& m, double x);
double pure_inverse(const PureMap& m, double y);
PureMap zoom_pure(const PureMap& m, const Interval& I);

/// Diffeomorphism given by sampled nonlinearity on a uniform grid, reconstructed through N^{-1}.
class GridDiffeo final : public Diffeo {
public:
    static constexpr int kDefaultNodes = 1025;

    GridDiffeo(double alpha, std::vector<double> nl);
    static GridDiffeo from_function(double alpha, const std::function<double(double)>& nl,
                                    int n = kDefaultNodes);
    /// Samples the nonlinearity of a diffeo with closed-form N.
    static GridDiffeo sample(double alpha, const Diffeo& d, int n = kDefaultNodes);

    int n() const { return static_cast<int>(nl_.size()); }
    double alpha() const { return alpha_; }
    const std::vector<double>& nl() const { return nl_; }
    double node(int k) const { return k * h_; }

    double value(double x) const override;
    double deriv(double x) const override;
    double inverse(double y) const override;
    double nonlinearity(double x) const override;
    double nonlinearity_deriv(double x) const override;

    GridDiffeo zoom(const Interval& I) const;

private:
    double alpha_;
    std::vector<double> nl_;
    double h_;
    std::vector<double> F_;  // cumulative integral of nl
    std::vector<double> E_;  // exp(F)
    std::vector<double> G_;  // cumulative integral of E
    double F_at(double x) const;
    double G_at(double x) const;
};

double nonlinearity_inverse(const GridDiffeo& g, double x);

/// Inverse of a diffeo as a diffeo; nonlinearity through the inverse chain rule.
class InverseDiffeo final : public Diffeo {
public:
    explicit InverseDiffeo(DiffeoPtr base) : base_(std::move(base)) {}
    double value(double x) const override { return base_->inverse(x); }
    double deriv(double x) const override { return 1.0 / base_->deriv(base_->inverse(x)); }
    double inverse(double y) const override { return base_->value(y); }
    double nonlinearity(double x) const override;
    double nonlinearity_deriv(double x) const override;

private:
    DiffeoPtr base_;
};

/// Sup of log(Dphi(x)/Dphi(y)) over x, y in I. Exact for pure maps, 257-point grid otherwise.
double distortion(const Diffeo& d, const Interval& I = kUnit);
double distortion(const PureMap& m, const Interval& I = kUnit);

/// S = DN - N^2/2.
double schwarzian(const Diffeo& d, double x);

struct KoebeReport {
    bool applicable = true;  // Sf >= 0 at every sample
    bool holds = true;       // |Nf(x)| <= 2 / min(x-a, b-x) at every sample
    double max_ratio = 0.0;  // max |Nf(x)| * min(x-a, b-x) / 2
    int samples = 0;
    bool ok() const { return !applicable || holds; }
};

/// f is defined on the extension J = (a,b); the bound is checked at samples of I.
KoebeReport koebe_check(const Diffeo& f, const Interval& I, const Interval& J, int samples = 257);

}  // namespace renormlab
