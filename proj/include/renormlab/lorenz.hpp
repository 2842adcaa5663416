#pragma once

#include <string>
#include <vector>

#include "renormlab/decomp.hpp"

namespace renormlab {

/// Standard family Q: Q0(x) = u(1 - ((c-x)/c)^alpha) on [0,c), Q1(x) = 1 + v(-1 + ((x-c)/(1-c))^alpha) on (c,1].
double q_eval(int branch, double u, double v, double c, double alpha, double x);
double q_deriv(int branch, double u, double v, double c, double alpha, double x);
double q_inverse(int branch, double u, double v, double c, double alpha, double y);

/// Common interface of Lorenz maps f = phi o Q0 on [0,c), psi o Q1 on (c,1].
class LorenzBase {
public:
    LorenzBase(double alpha, double u, double v, double c);
    virtual ~LorenzBase() = default;

    double alpha() const { return alpha_; }
    double u() const { return u_; }
    double v() const { return v_; }
    double c() const { return c_; }

    virtual double phi(double x) const = 0;
    virtual double phi_deriv(double x) const = 0;
    virtual double phi_inverse(double y) const = 0;
    virtual double psi(double x) const = 0;
    virtual double psi_deriv(double x) const = 0;
    virtual double psi_inverse(double y) const = 0;

    double Q(int branch, double x) const { return q_eval(branch, u_, v_, c_, alpha_, x); }
    double lcv() const { return phi(u_); }
    double rcv() const { return psi(1.0 - v_); }

    /// f(x); x = c raises CriticalPoint.
    double eval(double x) const;
    double deriv(double x) const;
    /// Branch evaluation on the closure of the branch domain (one-sided limit at c).
    double eval_branch(int branch, double x) const;
    double deriv_branch(int branch, double x) const;
    double inverse_branch(int branch, double y) const;
    bool nontrivial() const;

protected:
    double alpha_, u_, v_, c_;
};

/// Decomposition-backed Lorenz map: the canonical representation.
class LorenzMap final : public LorenzBase {
public:
    LorenzMap(double alpha, double u, double v, double c, Decomposition phi, Decomposition psi);
    LorenzMap(double alpha, double u, double v, double c)
        : LorenzMap(alpha, u, v, c, Decomposition(alpha), Decomposition(alpha)) {}

    const Decomposition& phi_decomposition() const { return phi_; }
    const Decomposition& psi_decomposition() const { return psi_; }

    double phi(double x) const override { return phi_.apply(x); }
    double phi_deriv(double x) const override { return phi_.apply_deriv(x); }
    double phi_inverse(double y) const override { return phi_.apply_inverse(y); }
    double psi(double x) const override { return psi_.apply(x); }
    double psi_deriv(double x) const override { return psi_.apply_deriv(x); }
    double psi_inverse(double y) const override { return psi_.apply_inverse(y); }

    LorenzMap with_params(double u, double v) const { return LorenzMap(alpha_, u, v, c_, phi_, psi_); }

private:
    Decomposition phi_, psi_;
};

/// Lorenz map with arbitrary diffeomorphic parts (composed or grid-backed).
class GeneralLorenzMap final : public LorenzBase {
public:
    GeneralLorenzMap(double alpha, double u, double v, double c, DiffeoPtr phi, DiffeoPtr psi);

    const DiffeoPtr& phi_ptr() const { return phi_; }
    const DiffeoPtr& psi_ptr() const { return psi_; }

    double phi(double x) const override { return phi_->value(x); }
    double phi_deriv(double x) const override { return phi_->deriv(x); }
    double phi_inverse(double y) const override { return phi_->inverse(y); }
    double psi(double x) const override { return psi_->value(x); }
    double psi_deriv(double x) const override { return psi_->deriv(x); }
    double psi_inverse(double y) const override { return psi_->inverse(y); }

private:
    DiffeoPtr phi_, psi_;
};

/// O f: the Lorenz map with composed diffeomorphic parts.
GeneralLorenzMap compose_map(const LorenzMap& f);

double f_eval(const LorenzBase& f, double x);
double f_deriv(const LorenzBase& f, double x);
double inverse_branch(const LorenzBase& f, int branch, double y);
bool nontrivial(const LorenzBase& f);

struct Orbit {
    std::vector<double> points;  // x_0 .. x_n
    std::string word;            // side of x_0 .. x_{n-1}
};

constexpr double kCriticalTol = 1e-13;

/// n iterates with branch labels; fails when an iterate comes within 1e-13 of c.
Orbit orbit(const LorenzBase& f, double x0, int n);

}  // namespace renormlab
