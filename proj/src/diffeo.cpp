#include "renormlab/diffeo.hpp"

#include <cmath>
#include <limits>

namespace renormlab {

namespace {

constexpr double kDomainSlack = 1e-12;

double checked_unit(double x, const char* what) {
    if (!(x >= -kDomainSlack && x <= 1.0 + kDomainSlack))
        throw Error(ErrorCode::Domain, std::string(what) + ": argument outside [0,1]");
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

double Diffeo::nonlinearity(double) const {
    throw Error(ErrorCode::InvalidArgument, "nonlinearity not available for this diffeomorphism");
}

double Diffeo::nonlinearity_deriv(double) const {
    throw Error(ErrorCode::InvalidArgument, "nonlinearity derivative not available for this diffeomorphism");
}

// ---------------------------------------------------------------- PureMap

PureMap::PureMap(double alpha, double s) : alpha_(alpha), s_(s) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::InvalidArgument, "critical exponent must be > 1");
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "distortion parameter must be finite");
    const double k = s / (alpha - 1.0);
    r_ = std::expm1(k);
    denom_ = std::expm1(alpha * k);
    ek_ = std::exp(k);
    small_ = std::fabs(s) < kSmallS;
}

PureMap PureMap::from_power_interval(double alpha, double a, double b) {
    return from_power_interval_width(alpha, a, b - a);
}

PureMap PureMap::from_power_interval_width(double alpha, double a, double w) {
    if (!(w > 0.0) || a == 0.0 || (a < 0.0 && a + w > 0.0))
        throw Error(ErrorCode::DegenerateInterval, "power-law zoom needs an interval not containing 0");
    // x|x|^{alpha-1} restricted to [a,b] rescales to mu_s with s = (alpha-1) log(b/a).
    return PureMap(alpha, (alpha - 1.0) * std::log1p(w / a));
}

double PureMap::base(double x) const {
    const double rx = r_ * x;
    return std::fabs(rx) < 0.5 ? 1.0 + rx : (1.0 - x) + x * ek_;
}

double PureMap::log_base(double x) const {
    const double rx = r_ * x;
    return std::fabs(rx) < 0.5 ? std::log1p(rx) : std::log((1.0 - x) + x * ek_);
}

double PureMap::value(double x) const {
    x = checked_unit(x, "pure_eval");
    if (s_ == 0.0) return x;
    if (small_) return x + 0.5 * s_ * x * (x - 1.0);
    if (x == 1.0) return 1.0;
    return std::expm1(alpha_ * log_base(x)) / denom_;
}

double PureMap::deriv(double x) const {
    x = checked_unit(x, "pure_deriv");
    if (s_ == 0.0) return 1.0;
    if (small_) return 1.0 + s_ * (x - 0.5);
    return alpha_ * r_ * std::exp((alpha_ - 1.0) * log_base(x)) / denom_;
}

double PureMap::inverse(double y) const {
    y = checked_unit(y, "pure_inverse");
    if (s_ == 0.0) return y;
    if (small_) return y - 0.5 * s_ * y * (y - 1.0);
    if (y == 1.0) return 1.0;
    return std::expm1(std::log1p(y * denom_) / alpha_) / r_;
}

double PureMap::nonlinearity(double x) const {
    x = checked_unit(x, "pure_nonlinearity");
    if (small_) return s_;
    return r_ * (alpha_ - 1.0) / base(x);
}

double PureMap::nonlinearity_deriv(double x) const {
    const double n = nonlinearity(x);
    return -n * n / (alpha_ - 1.0);
}

double PureMap::schwarzian(double x) const {
    const double n = nonlinearity(x);
    return -n * n * (1.0 / (alpha_ - 1.0) + 0.5);
}

double PureMap::norm() const { return (alpha_ - 1.0) * std::expm1(distortion() / (alpha_ - 1.0)); }

double PureMap::image_width(double lo, double width) const {
    if (s_ == 0.0) return width;
    if (small_) return width * (1.0 + 0.5 * s_ * (2.0 * lo + width - 1.0));
    // ((1+r hi)^a - (1+r lo)^a) / D = (1+r lo)^a * expm1(a log1p(r w / (1+r lo))) / D
    return std::exp(alpha_ * log_base(lo)) * std::expm1(alpha_ * std::log1p(r_ * width / base(lo))) / denom_;
}

PureMap PureMap::zoom(const Interval& I) const {
    checked_unit(I.lo, "zoom_pure");
    checked_unit(I.hi, "zoom_pure");
    return zoom_lw(I.lo, I.hi - I.lo);
}

PureMap PureMap::zoom_lw(double lo, double width) const {
    if (!(width > 0.0)) throw Error(ErrorCode::DegenerateInterval, "zoom on a degenerate interval");
    if (s_ == 0.0) return PureMap(alpha_, 0.0);
    return PureMap(alpha_, (alpha_ - 1.0) * std::log1p(r_ * width / base(lo)));
}

PureMap make_pure(double alpha, double s) { return PureMap(alpha, s); }
double pure_eval(const PureMap& m, double x) { return m.value(x); }
double pure_nonlinearity(const PureMap& m, double x) { return m.nonlinearity(x); }
double pure_inverse(const PureMap& m, double y) { return m.inverse(y); }
PureMap zoom_pure(const PureMap& m, const Interval& I) { return m.zoom(I); }

// ---------------------------------------------------------------- GridDiffeo

namespace {

// Integral over [0, th] (units of h) of the quadratic through nodes at t = 0, 1, 2.
double quad_fwd(double f0, double f1, double f2, double th) {
    const double t2 = th * th, t3 = t2 * th;
    return f0 * 0.5 * (t3 / 3.0 - 1.5 * t2 + 2.0 * th) - f1 * (t3 / 3.0 - t2) + f2 * 0.5 * (t3 / 3.0 - 0.5 * t2);
}
// Same with nodes at t = -1, 0, 1.
double quad_ctr(double fm, double f0, double f1, double th) {
    const double t2 = th * th, t3 = t2 * th;
    return fm * 0.5 * (t3 / 3.0 - 0.5 * t2) + f0 * (th - t3 / 3.0) + f1 * 0.5 * (t3 / 3.0 + 0.5 * t2);
}

void cumulative_simpson(const std::vector<double>& f, double h, std::vector<double>& out) {
    const std::size_t n = f.size();
    out.assign(n, 0.0);
    for (std::size_t k = 0; k + 2 < n; k += 2) {
        out[k + 1] = out[k] + h / 12.0 * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]);
        out[k + 2] = out[k] + h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
    }
}

// Integral of the local quadratic interpolant of f from node j to x = (j + th) h.
double partial(const std::vector<double>& f, std::size_t j, double th) {
    if (j + 2 < f.size()) return quad_fwd(f[j], f[j + 1], f[j + 2], th);
    return quad_ctr(f[j - 1], f[j], f[j + 1], th);
}

}  // namespace

GridDiffeo::GridDiffeo(double alpha, std::vector<double> nl) : alpha_(alpha), nl_(std::move(nl)) {
    const std::size_t n = nl_.size();
    if (n < 3 || ((n - 1) & (n - 2)) != 0)
        throw Error(ErrorCode::InvalidArgument, "grid size must be 2^k + 1 with k >= 1");
    for (double v : nl_)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "nonlinearity samples must be finite");
    h_ = 1.0 / static_cast<double>(n - 1);
    cumulative_simpson(nl_, h_, F_);
    E_.resize(n);
    for (std::size_t k = 0; k < n; ++k) E_[k] = std::exp(F_[k]);
    cumulative_simpson(E_, h_, G_);
}

GridDiffeo GridDiffeo::from_function(double alpha, const std::function<double(double)>& nl, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double h = 1.0 / (n - 1);
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = nl(k == n - 1 ? 1.0 : k * h);
    return GridDiffeo(alpha, std::move(v));
}

GridDiffeo GridDiffeo::sample(double alpha, const Diffeo& d, int n) {
    return from_function(alpha, [&d](double x) { return d.nonlinearity(x); }, n);
}

double GridDiffeo::F_at(double x) const {
    const double t = x / h_;
    std::size_t j = static_cast<std::size_t>(std::floor(t));
    if (j >= nl_.size() - 1) j = nl_.size() - 2;
    return F_[j] + h_ * partial(nl_, j, t - static_cast<double>(j));
}

double GridDiffeo::G_at(double x) const {
    const double t = x / h_;
    std::size_t j = static_cast<std::size_t>(std::floor(t));
    if (j >= nl_.size() - 1) j = nl_.size() - 2;
    return G_[j] + h_ * partial(E_, j, t - static_cast<double>(j));
}

double GridDiffeo::value(double x) const {
    x = checked_unit(x, "grid_eval");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    return std::clamp(G_at(x) / G_.back(), 0.0, 1.0);
}

double GridDiffeo::deriv(double x) const {
    x = checked_unit(x, "grid_deriv");
    return std::exp(F_at(x)) / G_.back();
}

double GridDiffeo::inverse(double y) const {
    y = checked_unit(y, "grid_inverse");
    if (y == 0.0 || y == 1.0) return y;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double m = 0.5 * (lo + hi);
        (value(m) < y ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

double GridDiffeo::nonlinearity(double x) const {
    x = checked_unit(x, "grid_nonlinearity");
    const double t = x / h_;
    std::size_t j = static_cast<std::size_t>(std::floor(t));
    if (j >= nl_.size() - 2) j = nl_.size() - 3;
    const double th = t - static_cast<double>(j);
    return nl_[j] * 0.5 * (th - 1.0) * (th - 2.0) - nl_[j + 1] * th * (th - 2.0) + nl_[j + 2] * 0.5 * th * (th - 1.0);
}

double GridDiffeo::nonlinearity_deriv(double x) const {
    x = checked_unit(x, "grid_nonlinearity");
    const double t = x / h_;
    std::size_t j = static_cast<std::size_t>(std::floor(t));
    if (j >= nl_.size() - 2) j = nl_.size() - 3;
    const double th = t - static_cast<double>(j);
    return (nl_[j] * (th - 1.5) - nl_[j + 1] * (2.0 * th - 2.0) + nl_[j + 2] * (th - 0.5)) / h_;
}

GridDiffeo GridDiffeo::zoom(const Interval& I) const {
    const double w = I.length();
    return from_function(alpha_, [&](double x) { return w * nonlinearity(I.from_unit(x)); }, n());
}

double nonlinearity_inverse(const GridDiffeo& g, double x) { return g.value(x); }

// ---------------------------------------------------------------- inverse, distortion, Schwarzian, Koebe

double InverseDiffeo::nonlinearity(double y) const {
    const double x = base_->inverse(y);
    return -base_->nonlinearity(x) / base_->deriv(x);
}

double InverseDiffeo::nonlinearity_deriv(double y) const {
    const double x = base_->inverse(y);
    const double d = base_->deriv(x);
    const double n = base_->nonlinearity(x);
    return (n * n - base_->nonlinearity_deriv(x)) / (d * d);
}

double distortion(const Diffeo& d, const Interval& I) {
    constexpr int kSamples = 257;
    double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin;
    for (int k = 0; k < kSamples; ++k) {
        const double l = std::log(d.deriv(I.from_unit(static_cast<double>(k) / (kSamples - 1))));
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
    }
    return lmax - lmin;
}

double distortion(const PureMap& m, const Interval& I) { return m.zoom(I).distortion(); }

double schwarzian(const Diffeo& d, double x) {
    const double n = d.nonlinearity(x);
    return d.nonlinearity_deriv(x) - 0.5 * n * n;
}

KoebeReport koebe_check(const Diffeo& f, const Interval& I, const Interval& J, int samples) {
    if (!J.contains(I)) throw Error(ErrorCode::InvalidArgument, "Koebe extension must contain the sample interval");
    KoebeReport rep;
    for (int k = 1; k <= samples; ++k) {
        const double x = I.from_unit(static_cast<double>(k) / (samples + 1));
        const double dist = std::min(x - J.lo, J.hi - x);
        if (!(dist > 0.0)) continue;
        ++rep.samples;
        if (schwarzian(f, x) < -1e-12) rep.applicable = false;
        const double ratio = std::fabs(f.nonlinearity(x)) * dist / 2.0;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (ratio > 1.0 + 1e-12) rep.holds = false;
    }
    return rep;
}

}  // namespace renormlab
