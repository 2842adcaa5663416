#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "renormlab/diffeo.hpp"

namespace renormlab {

/// Where a piece came from. Base pieces are user input; the rest are produced by renormalization.
enum class Origin : std::uint8_t { Base, Phi, Psi, Q0, Q1 };

/// Compact origin trace. The order of a decomposition is its list order; seq mirrors it.
struct TimeLabel {
    Origin origin = Origin::Base;
    std::uint32_t step = 0;  // renormalization cycle step the piece was zoomed on
    std::uint32_t seq = 0;   // position in the owning list
    bool operator<(const TimeLabel& o) const { return seq < o.seq; }
};

struct Piece {
    TimeLabel label;
    PureMap map;
};

/// Finite ordered list of pure maps phi_0, ..., phi_{n-1}; composes to phi_{n-1} o ... o phi_0.
class Decomposition {
public:
    explicit Decomposition(double alpha = 2.0) : alpha_(alpha) {}
    Decomposition(double alpha, std::vector<Piece> pieces);
    static Decomposition from_s(double alpha, const std::vector<double>& s, Origin origin = Origin::Base);

    double alpha() const { return alpha_; }
    std::size_t size() const { return pieces_.size(); }
    bool empty() const { return pieces_.empty(); }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const PureMap& map(std::size_t k) const { return pieces_[k].map; }
    std::vector<double> s_values() const;

    void push_back(const PureMap& m, Origin origin = Origin::Base, std::uint32_t step = 0);
    void append(const Decomposition& d);

    /// l1 norm: sum of sup |N mu_k|.
    double norm() const;
    /// Sum of |s_k|.
    double distortion() const;

    /// Composition of pieces [j, k) applied to x.
    double apply_range(std::size_t j, std::size_t k, double x) const;
    double apply(double x) const { return apply_range(0, size(), x); }
    double apply_deriv_range(std::size_t j, std::size_t k, double x) const;
    double apply_deriv(double x) const { return apply_deriv_range(0, size(), x); }
    double apply_inverse_range(std::size_t j, std::size_t k, double y) const;
    double apply_inverse(double y) const { return apply_inverse_range(0, size(), y); }
    /// Nonlinearity and its derivative of the composed map on [j, k), by the chain rule.
    std::pair<double, double> nonlinearity_range(std::size_t j, std::size_t k, double x) const;
    /// Width of the image of [lo, lo + w] under pieces [j, k), propagated without cancellation.
    Interval image_range(std::size_t j, std::size_t k, const Interval& I) const;
    Interval image(const Interval& I) const { return image_range(0, size(), I); }

    /// Zoom with I_tau = O_{<tau}(I); also returns the final image interval.
    std::pair<Decomposition, Interval> zoom_with_image(const Interval& I) const;
    Decomposition zoom(const Interval& I) const { return zoom_with_image(I).first; }

    /// Drops pieces with |s| below tol and renumbers labels.
    Decomposition pruned(double tol = 1e-15) const;

private:
    double alpha_;
    std::vector<Piece> pieces_;
    void renumber();
};

/// Callable handle over a slice of a decomposition.
class ComposedDiffeo final : public Diffeo {
public:
    ComposedDiffeo(std::shared_ptr<const Decomposition> d, std::size_t j, std::size_t k);
    double value(double x) const override { return d_->apply_range(j_, k_, x); }
    double deriv(double x) const override { return d_->apply_deriv_range(j_, k_, x); }
    double inverse(double y) const override { return d_->apply_inverse_range(j_, k_, y); }
    double nonlinearity(double x) const override { return d_->nonlinearity_range(j_, k_, x).first; }
    double nonlinearity_deriv(double x) const override { return d_->nonlinearity_range(j_, k_, x).second; }

private:
    std::shared_ptr<const Decomposition> d_;
    std::size_t j_, k_;
};

DiffeoPtr compose(const Decomposition& d);
/// Composes the inclusive slice [j..k], 0 <= j <= k < n.
DiffeoPtr partial_compose(const Decomposition& d, std::size_t j, std::size_t k);
/// O_{<tau}: pieces before tau (identity for tau = 0).
DiffeoPtr compose_before(const Decomposition& d, std::size_t tau);
/// O_{>=tau}: pieces from tau on.
DiffeoPtr compose_from(const Decomposition& d, std::size_t tau);

Decomposition zoom_decomposition(const Decomposition& d, const Interval& I);
/// d0 first, then d1: compose(d0 ⊔ d1) = compose(d1) o compose(d0).
Decomposition disjoint_union(const Decomposition& d0, const Decomposition& d1);

/// sup |N(psi) - N(phi)| on a 257-point grid, psi = d with gamma inserted at position i.
double sandwich_error(const Decomposition& d, const PureMap& gamma, std::size_t i);

struct PureDistance {
    double distance;
    double rho;  // minimizing parameter, rho > -1
};
/// inf over rho > -1 of sup |N g - rho(alpha-1)/(1+rho x)| on the grid nodes.
PureDistance distance_to_pure_detail(const GridDiffeo& g);
double distance_to_pure(const GridDiffeo& g);

}  // namespace renormlab
