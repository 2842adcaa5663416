#include "renormlab/decomp.hpp"

#include <cmath>
#include <limits>

namespace renormlab {

Decomposition::Decomposition(double alpha, std::vector<Piece> pieces) : alpha_(alpha), pieces_(std::move(pieces)) {
    for (const auto& p : pieces_)
        if (p.map.alpha() != alpha_)
            throw Error(ErrorCode::InvalidArgument, "all pieces of a decomposition share the critical exponent");
    renumber();
}

Decomposition Decomposition::from_s(double alpha, const std::vector<double>& s, Origin origin) {
    Decomposition d(alpha);
    for (double v : s) d.push_back(PureMap(alpha, v), origin);
    return d;
}

void Decomposition::renumber() {
    for (std::size_t k = 0; k < pieces_.size(); ++k) pieces_[k].label.seq = static_cast<std::uint32_t>(k);
}

std::vector<double> Decomposition::s_values() const {
    std::vector<double> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) out.push_back(p.map.s());
    return out;
}

void Decomposition::push_back(const PureMap& m, Origin origin, std::uint32_t step) {
    if (m.alpha() != alpha_) throw Error(ErrorCode::InvalidArgument, "piece exponent differs from decomposition");
    pieces_.push_back({TimeLabel{origin, step, static_cast<std::uint32_t>(pieces_.size())}, m});
}

void Decomposition::append(const Decomposition& d) {
    if (!d.empty() && d.alpha_ != alpha_)
        throw Error(ErrorCode::InvalidArgument, "cannot join decompositions with different exponents");
    for (const auto& p : d.pieces_) pieces_.push_back(p);
    renumber();
}

double Decomposition::norm() const {
    double n = 0.0;
    for (const auto& p : pieces_) n += p.map.norm();
    return n;
}

double Decomposition::distortion() const {
    double n = 0.0;
    for (const auto& p : pieces_) n += p.map.distortion();
    return n;
}

namespace {
void check_range(std::size_t j, std::size_t k, std::size_t n) {
    if (j > k || k > n) throw Error(ErrorCode::IndexOutOfRange, "decomposition slice out of range");
}
}  // namespace

double Decomposition::apply_range(std::size_t j, std::size_t k, double x) const {
    check_range(j, k, size());
    for (std::size_t t = j; t < k; ++t) x = pieces_[t].map.value(x);
    return x;
}

double Decomposition::apply_deriv_range(std::size_t j, std::size_t k, double x) const {
    check_range(j, k, size());
    double d = 1.0;
    for (std::size_t t = j; t < k; ++t) {
        d *= pieces_[t].map.deriv(x);
        x = pieces_[t].map.value(x);
    }
    return d;
}

double Decomposition::apply_inverse_range(std::size_t j, std::size_t k, double y) const {
    check_range(j, k, size());
    for (std::size_t t = k; t > j; --t) y = pieces_[t - 1].map.inverse(y);
    return y;
}

std::pair<double, double> Decomposition::nonlinearity_range(std::size_t j, std::size_t k, double x) const {
    check_range(j, k, size());
    // N = sum N_t(x_t) D_t,  DN = sum N_t'(x_t) D_t^2 + N_t(x_t) D_t P_t,  P_t = partial N before t.
    double D = 1.0, P = 0.0, dn = 0.0;
    for (std::size_t t = j; t < k; ++t) {
        const PureMap& m = pieces_[t].map;
        const double nt = m.nonlinearity(x);
        dn += m.nonlinearity_deriv(x) * D * D + nt * D * P;
        P += nt * D;
        D *= m.deriv(x);
        x = m.value(x);
    }
    return {P, dn};
}

Interval Decomposition::image_range(std::size_t j, std::size_t k, const Interval& I) const {
    check_range(j, k, size());
    double lo = I.lo, w = I.length();
    for (std::size_t t = j; t < k; ++t) {
        const PureMap& m = pieces_[t].map;
        w = m.image_width(lo, w);
        lo = m.value(lo);
    }
    return Interval(lo, std::min(1.0, lo + w));
}

std::pair<Decomposition, Interval> Decomposition::zoom_with_image(const Interval& I) const {
    Decomposition out(alpha_);
    out.pieces_.reserve(pieces_.size());
    double lo = I.lo, w = I.length();
    for (const auto& p : pieces_) {
        out.pieces_.push_back({p.label, p.map.zoom_lw(lo, w)});
        w = p.map.image_width(lo, w);
        lo = p.map.value(lo);
    }
    out.renumber();
    return {std::move(out), Interval(lo, std::min(1.0, lo + w))};
}

Decomposition Decomposition::pruned(double tol) const {
    Decomposition out(alpha_);
    for (const auto& p : pieces_)
        if (std::fabs(p.map.s()) >= tol) out.pieces_.push_back(p);
    out.renumber();
    return out;
}

ComposedDiffeo::ComposedDiffeo(std::shared_ptr<const Decomposition> d, std::size_t j, std::size_t k)
    : d_(std::move(d)), j_(j), k_(k) {
    check_range(j_, k_, d_->size());
}

DiffeoPtr compose(const Decomposition& d) {
    auto p = std::make_shared<const Decomposition>(d);
    return std::make_shared<ComposedDiffeo>(p, 0, p->size());
}

DiffeoPtr partial_compose(const Decomposition& d, std::size_t j, std::size_t k) {
    if (j > k || k >= d.size()) throw Error(ErrorCode::IndexOutOfRange, "partial composition index out of range");
    return std::make_shared<ComposedDiffeo>(std::make_shared<const Decomposition>(d), j, k + 1);
}

DiffeoPtr compose_before(const Decomposition& d, std::size_t tau) {
    if (tau > d.size()) throw Error(ErrorCode::IndexOutOfRange, "partial composition index out of range");
    return std::make_shared<ComposedDiffeo>(std::make_shared<const Decomposition>(d), 0, tau);
}

DiffeoPtr compose_from(const Decomposition& d, std::size_t tau) {
    if (tau > d.size()) throw Error(ErrorCode::IndexOutOfRange, "partial composition index out of range");
    return std::make_shared<ComposedDiffeo>(std::make_shared<const Decomposition>(d), tau, d.size());
}

Decomposition zoom_decomposition(const Decomposition& d, const Interval& I) {
    if (I.lo < 0.0 || I.hi > 1.0) throw Error(ErrorCode::Domain, "zoom interval must lie in [0,1]");
    return d.zoom(I);
}

Decomposition disjoint_union(const Decomposition& d0, const Decomposition& d1) {
    if (d0.empty()) return d1;
    Decomposition out = d0;
    out.append(d1);
    return out;
}

double sandwich_error(const Decomposition& d, const PureMap& gamma, std::size_t i) {
    if (i > d.size()) throw Error(ErrorCode::IndexOutOfRange, "insertion position out of range");
    std::vector<Piece> ps(d.pieces().begin(), d.pieces().end());
    ps.insert(ps.begin() + static_cast<std::ptrdiff_t>(i), Piece{TimeLabel{}, gamma});
    const Decomposition psi(gamma.alpha(), std::move(ps));
    constexpr int kSamples = 257;
    double err = 0.0;
    for (int k = 0; k < kSamples; ++k) {
        const double x = static_cast<double>(k) / (kSamples - 1);
        err = std::max(err, std::fabs(psi.nonlinearity_range(0, psi.size(), x).first -
                                      d.nonlinearity_range(0, d.size(), x).first));
    }
    return err;
}

PureDistance distance_to_pure_detail(const GridDiffeo& g) {
    const double am1 = g.alpha() - 1.0;
    const auto& nl = g.nl();
    const int n = g.n();
    // Search in s (rho = r_s); sup-error is quasi-convex in s since N_s(x) is increasing in s.
    auto objective = [&](double s) {
        const double r = std::expm1(s / am1);
        double e = 0.0;
        for (int k = 0; k < n; ++k) e = std::max(e, std::fabs(nl[k] - r * am1 / (1.0 + r * g.node(k))));
        return e;
    };
    double lo = -40.0 * am1, hi = 40.0 * am1;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > 1e-13) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = objective(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = objective(x2);
        }
    }
    const double s = 0.5 * (lo + hi);
    return {objective(s), std::expm1(s / am1)};
}

double distance_to_pure(const GridDiffeo& g) { return distance_to_pure_detail(g).distance; }

}  // namespace renormlab
