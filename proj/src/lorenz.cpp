#include "renormlab/lorenz.hpp"

#include <cmath>

namespace renormlab {

namespace {

void check_params(double alpha, double u, double v, double c) {
    if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidArgument, "critical exponent must be > 1");
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidArgument, "critical point must lie in (0,1)");
    if (!(u >= 0.0 && u <= 1.0) || !(v >= 0.0 && v <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "u and v must lie in [0,1]");
}

constexpr double kRangeSlack = 1e-14;

}  // namespace

double q_eval(int branch, double u, double v, double c, double alpha, double x) {
    if (x == c) throw Error(ErrorCode::CriticalPoint, "Q is undefined at the critical point");
    if (branch == 0) {
        if (!(x >= 0.0 && x < c)) throw Error(ErrorCode::Domain, "Q0 argument outside [0,c)");
        return -u * std::expm1(alpha * std::log1p(-x / c));
    }
    if (!(x > c && x <= 1.0)) throw Error(ErrorCode::Domain, "Q1 argument outside (c,1]");
    return 1.0 + v * std::expm1(alpha * std::log((x - c) / (1.0 - c)));
}

double q_deriv(int branch, double u, double v, double c, double alpha, double x) {
    if (x == c) throw Error(ErrorCode::CriticalPoint, "Q is undefined at the critical point");
    if (branch == 0) return u * alpha / c * std::pow((c - x) / c, alpha - 1.0);
    return v * alpha / (1.0 - c) * std::pow((x - c) / (1.0 - c), alpha - 1.0);
}

double q_inverse(int branch, double u, double v, double c, double alpha, double y) {
    if (branch == 0) {
        if (!(y >= -kRangeSlack && y <= u + kRangeSlack)) throw Error(ErrorCode::NoPreimage, "no preimage on branch 0");
        const double t = std::clamp(1.0 - y / u, 0.0, 1.0);
        return c - c * std::pow(t, 1.0 / alpha);
    }
    if (!(y >= 1.0 - v - kRangeSlack && y <= 1.0 + kRangeSlack))
        throw Error(ErrorCode::NoPreimage, "no preimage on branch 1");
    const double t = std::clamp(1.0 - (1.0 - y) / v, 0.0, 1.0);
    return c + (1.0 - c) * std::pow(t, 1.0 / alpha);
}

LorenzBase::LorenzBase(double alpha, double u, double v, double c) : alpha_(alpha), u_(u), v_(v), c_(c) {
    check_params(alpha, u, v, c);
}

double LorenzBase::eval_branch(int branch, double x) const {
    if (branch == 0) {
        const double t = std::clamp((c_ - x) / c_, 0.0, 1.0);
        return phi(-u_ * std::expm1(alpha_ * std::log(t)));
    }
    const double t = std::clamp((x - c_) / (1.0 - c_), 0.0, 1.0);
    return psi(1.0 + v_ * std::expm1(alpha_ * std::log(t)));
}

double LorenzBase::deriv_branch(int branch, double x) const {
    if (branch == 0) {
        const double t = std::clamp((c_ - x) / c_, 0.0, 1.0);
        const double q = -u_ * std::expm1(alpha_ * std::log(t));
        return phi_deriv(q) * u_ * alpha_ / c_ * std::pow(t, alpha_ - 1.0);
    }
    const double t = std::clamp((x - c_) / (1.0 - c_), 0.0, 1.0);
    const double q = 1.0 + v_ * std::expm1(alpha_ * std::log(t));
    return psi_deriv(q) * v_ * alpha_ / (1.0 - c_) * std::pow(t, alpha_ - 1.0);
}

double LorenzBase::eval(double x) const {
    if (x == c_) throw Error(ErrorCode::CriticalPoint, "f is undefined at the critical point");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Domain, "f argument outside [0,1]");
    return eval_branch(x < c_ ? 0 : 1, x);
}

double LorenzBase::deriv(double x) const {
    if (x == c_) throw Error(ErrorCode::CriticalPoint, "f is undefined at the critical point");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Domain, "f argument outside [0,1]");
    return deriv_branch(x < c_ ? 0 : 1, x);
}

double LorenzBase::inverse_branch(int branch, double y) const {
    if (branch == 0) {
        const double top = lcv();
        if (!(y >= -kRangeSlack && y <= top + kRangeSlack)) throw Error(ErrorCode::NoPreimage, "no preimage on branch 0");
        return q_inverse(0, u_, v_, c_, alpha_, std::min(phi_inverse(std::clamp(y, 0.0, 1.0)), u_));
    }
    const double bottom = rcv();
    if (!(y >= bottom - kRangeSlack && y <= 1.0 + kRangeSlack))
        throw Error(ErrorCode::NoPreimage, "no preimage on branch 1");
    return q_inverse(1, u_, v_, c_, alpha_, std::max(psi_inverse(std::clamp(y, 0.0, 1.0)), 1.0 - v_));
}

bool LorenzBase::nontrivial() const {
    constexpr double tol = 1e-14;
    return rcv() < c_ - tol && lcv() > c_ + tol;
}

LorenzMap::LorenzMap(double alpha, double u, double v, double c, Decomposition phi, Decomposition psi)
    : LorenzBase(alpha, u, v, c), phi_(std::move(phi)), psi_(std::move(psi)) {
    if ((!phi_.empty() && phi_.alpha() != alpha) || (!psi_.empty() && psi_.alpha() != alpha))
        throw Error(ErrorCode::InvalidArgument, "decomposition exponent differs from the map's");
}

GeneralLorenzMap::GeneralLorenzMap(double alpha, double u, double v, double c, DiffeoPtr phi, DiffeoPtr psi)
    : LorenzBase(alpha, u, v, c), phi_(std::move(phi)), psi_(std::move(psi)) {
    if (!phi_ || !psi_) throw Error(ErrorCode::InvalidArgument, "diffeomorphic parts must be set");
}

GeneralLorenzMap compose_map(const LorenzMap& f) {
    return GeneralLorenzMap(f.alpha(), f.u(), f.v(), f.c(), compose(f.phi_decomposition()),
                            compose(f.psi_decomposition()));
}

double f_eval(const LorenzBase& f, double x) { return f.eval(x); }
double f_deriv(const LorenzBase& f, double x) { return f.deriv(x); }
double inverse_branch(const LorenzBase& f, int branch, double y) { return f.inverse_branch(branch, y); }
bool nontrivial(const LorenzBase& f) { return f.nontrivial(); }

Orbit orbit(const LorenzBase& f, double x0, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "orbit length must be nonnegative");
    Orbit o;
    o.points.reserve(static_cast<std::size_t>(n) + 1);
    o.points.push_back(x0);
    double x = x0;
    for (int k = 0; k < n; ++k) {
        if (std::fabs(x - f.c()) < kCriticalTol)
            throw Error(ErrorCode::HitCriticalPoint, "orbit hit the critical point at step " + std::to_string(k));
        const int side = x < f.c() ? 0 : 1;
        o.word.push_back(side == 0 ? '0' : '1');
        x = f.eval_branch(side, x);
        o.points.push_back(x);
    }
    return o;
}

}  // namespace renormlab
