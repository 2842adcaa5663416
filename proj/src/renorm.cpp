#include "renormlab/renorm.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "renormlab/parallel.hpp"

namespace renormlab {

namespace {

constexpr double kRootWidth = 1e-13;
constexpr double kPeriodTol = 1e-11;
constexpr double kClosedTol = 1e-12;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// Geometric-plus-uniform sample of (lo, hi) clustered at `anchor` (one of the ends).
std::vector<double> branch_samples(double far, double anchor) {
    std::vector<double> th;
    constexpr int kLinear = 48;
    for (int k = 0; k < kLinear; ++k) th.push_back(1.0 - static_cast<double>(k) / kLinear);
    for (int j = 1; j <= 40; ++j) th.push_back(std::ldexp(1.0 / kLinear, -j));
    std::vector<double> xs;
    xs.reserve(th.size());
    for (double t : th) xs.push_back(anchor + (far - anchor) * t);
    return xs;
}

// Root of g on [lo, hi] given sign(g(lo)) != sign(g(hi)); bisection then Newton polish.
template <class G, class DG>
double bracketed_root(G&& g, DG&& dg, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > kRootWidth; ++it) {
        const double m = 0.5 * (lo + hi);
        const double gm = g(m);
        if ((gm <= 0.0) == (glo <= 0.0)) {
            lo = m;
            glo = gm;
        } else {
            hi = m;
        }
    }
    double x = 0.5 * (lo + hi);
    double gx = g(x);
    const double wlo = lo - kRootWidth, whi = hi + kRootWidth;
    for (int it = 0; it < 8; ++it) {
        const double d = dg(x);
        if (!(std::isfinite(d)) || d == 0.0) break;
        const double xn = x - gx / d;
        if (!(xn > wlo && xn < whi)) break;
        const double gn = g(xn);
        if (!(std::fabs(gn) < std::fabs(gx))) break;
        x = xn;
        gx = gn;
    }
    return x;
}

double pull_back(const LorenzBase& f, int branch, int times, double y) {
    for (int k = 0; k < times; ++k) {
        try {
            y = f.inverse_branch(branch, y);
        } catch (const Error&) {
            fail(ErrorCode::ReturnNotContained, "return interval not contained in the branch range");
        }
    }
    return y;
}

}  // namespace

double left_return(const LorenzBase& f, int a, double x, double* deriv) {
    double d = f.deriv_branch(0, x);
    double y = f.eval_branch(0, x);
    for (int k = 0; k < a; ++k) {
        if (deriv) d *= f.deriv_branch(1, y);
        y = f.eval_branch(1, y);
    }
    if (deriv) *deriv = d;
    return y;
}

double right_return(const LorenzBase& f, int b, double x, double* deriv) {
    double d = f.deriv_branch(1, x);
    double y = f.eval_branch(1, x);
    for (int k = 0; k < b; ++k) {
        if (deriv) d *= f.deriv_branch(0, y);
        y = f.eval_branch(0, y);
    }
    if (deriv) *deriv = d;
    return y;
}

ReturnStructure detect(const LorenzBase& f, int a, int b, DetectOptions opt) {
    if (a < 1 || b < 1) throw Error(ErrorCode::InvalidArgument, "return-time parameters must be positive");
    if (!f.nontrivial()) fail(ErrorCode::Trivial, "not renormalizable: map is trivial");
    const double c = f.c();

    // Branch domain (l, c) of f1^a o f0: thresholds T_{k+1} = f1^{-1}(T_k), T_1 = c.
    double T = c;
    for (int k = 1; k < a; ++k) T = f.inverse_branch(1, T);
    if (!(T < f.lcv())) fail(ErrorCode::EmptyBranchDomain, "empty branch domain on the left");
    const double l = f.inverse_branch(0, T);
    double S = c;
    for (int k = 1; k < b; ++k) S = f.inverse_branch(0, S);
    if (!(S > f.rcv())) fail(ErrorCode::EmptyBranchDomain, "empty branch domain on the right");
    const double r = f.inverse_branch(1, S);
    if (!(l < c) || !(r > c)) fail(ErrorCode::EmptyBranchDomain, "empty branch domain");

    ReturnStructure rs;
    rs.a = a;
    rs.b = b;
    rs.branch_left = Interval(l, c);
    rs.branch_right = Interval(c, r);
    rs.return_left = left_return(f, a, c);
    rs.return_right = right_return(f, b, c);

    const double tl = opt.closed ? -kClosedTol : 1e-14;
    if (!(rs.return_left - c > tl) || !(c - rs.return_right > tl))
        fail(ErrorCode::TrivialRenormalization, "trivial renormalization: return of a critical value misses c");

    // p: largest fixed point of f1^a o f0 in (l, c).
    {
        auto g = [&](double x) { return left_return(f, a, x) - x; };
        auto dg = [&](double x) {
            double d;
            left_return(f, a, x, &d);
            return d - 1.0;
        };
        const auto xs = branch_samples(l, c);  // increasing toward c
        int last_neg = -1;
        std::vector<double> gs(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            gs[k] = g(xs[k]);
            if (gs[k] <= 0.0) last_neg = static_cast<int>(k);
        }
        if (last_neg < 0 || last_neg + 1 >= static_cast<int>(xs.size()))
            fail(ErrorCode::NoFixedPoint, "no fixed point of the left return branch");
        rs.p = bracketed_root(g, dg, xs[static_cast<std::size_t>(last_neg)],
                              xs[static_cast<std::size_t>(last_neg) + 1]);
    }
    // q: smallest fixed point of f0^b o f1 in (c, r).
    {
        auto g = [&](double x) { return right_return(f, b, x) - x; };
        auto dg = [&](double x) {
            double d;
            right_return(f, b, x, &d);
            return d - 1.0;
        };
        const auto xs = branch_samples(r, c);  // decreasing toward c
        int last_pos = -1;
        std::vector<double> gs(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            gs[k] = g(xs[k]);
            if (gs[k] >= 0.0) last_pos = static_cast<int>(k);
        }
        if (last_pos < 0 || last_pos + 1 >= static_cast<int>(xs.size()))
            fail(ErrorCode::NoFixedPoint, "no fixed point of the right return branch");
        rs.q = bracketed_root(g, dg, xs[static_cast<std::size_t>(last_pos) + 1],
                              xs[static_cast<std::size_t>(last_pos)]);
    }
    const double p = rs.p, q = rs.q;
    if (!(p < c && c < q)) fail(ErrorCode::NoFixedPoint, "periodic endpoints do not surround c");
    rs.C = Interval(p, q);
    rs.L = Interval(p, c);
    rs.R = Interval(c, q);

    double dp, dq;
    const double fp = left_return(f, a, p, &dp);
    const double fq = right_return(f, b, q, &dq);
    rs.multiplier_p = dp;
    rs.multiplier_q = dq;
    rs.period_error = std::max(std::fabs(fp - p), std::fabs(fq - q));
    if (rs.period_error > kPeriodTol) fail(ErrorCode::NoFixedPoint, "endpoint fails the periodicity check");
    if (!(dp > 1.0) || !(dq > 1.0)) fail(ErrorCode::NoFixedPoint, "periodic endpoint is not repelling");

    const double th = opt.closed ? kClosedTol : 1e-14;
    if (rs.return_left > q + th || rs.return_right < p - th)
        fail(ErrorCode::ReturnNotContained, "return of a critical value not contained in C");

    // Pullbacks U = phi^{-1} f1^{-a}(C), V = psi^{-1} f0^{-b}(C), with the outer ends Q0(p), Q1(q).
    const double u_lo = f.Q(0, p);
    const double u_hi = f.phi_inverse(pull_back(f, 1, a, q));
    const double v_hi = f.Q(1, q);
    const double v_lo = f.psi_inverse(pull_back(f, 0, b, p));
    if (!(u_lo < u_hi) || !(v_lo < v_hi)) fail(ErrorCode::ReturnNotContained, "degenerate pullback interval");
    // Q(L) = [Q0(p), u] must lie in U (equivalent to the return of c- landing in C).
    if (f.u() > u_hi + th || 1.0 - f.v() < v_lo - th)
        fail(ErrorCode::ReturnNotContained, "critical value outside the pullback interval");
    rs.U = Interval(u_lo, u_hi);
    rs.V = Interval(v_lo, v_hi);

    // Cycles, pushed forward from phi(U) and psi(V).
    rs.cycles_u.clear();
    Interval cur(f.phi(u_lo), f.phi(u_hi));
    for (int i = 1; i <= a; ++i) {
        if (!(cur.lo > c + kCriticalTol)) fail(ErrorCode::WordViolation, "left cycle enters the left branch");
        if (cur.lo < q - 1e-12) fail(ErrorCode::ReturnNotContained, "left cycle meets C before returning");
        rs.cycles_u.push_back(cur);
        if (i < a) cur = Interval(f.eval_branch(1, cur.lo), f.eval_branch(1, cur.hi));
    }
    rs.cycles_u.push_back(rs.C);
    rs.cycles_v.clear();
    cur = Interval(f.psi(v_lo), f.psi(v_hi));
    for (int j = 1; j <= b; ++j) {
        if (!(cur.hi < c - kCriticalTol)) fail(ErrorCode::WordViolation, "right cycle enters the right branch");
        if (cur.hi > p + 1e-12) fail(ErrorCode::ReturnNotContained, "right cycle meets C before returning");
        rs.cycles_v.push_back(cur);
        if (j < b) cur = Interval(f.eval_branch(0, cur.lo), f.eval_branch(0, cur.hi));
    }
    rs.cycles_v.push_back(rs.C);

    // Pairwise disjointness of the cycle intervals (C counted once).
    std::vector<Interval> all(rs.cycles_u.begin(), rs.cycles_u.end() - 1);
    all.insert(all.end(), rs.cycles_v.begin(), rs.cycles_v.end() - 1);
    all.push_back(rs.C);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i].overlap(all[j]) > 1e-12 * std::min(all[i].length(), all[j].length()))
                fail(ErrorCode::ReturnNotContained, "renormalization cycles overlap");
    return rs;
}

std::optional<ReturnStructure> try_detect(const LorenzBase& f, int a, int b, DetectOptions opt) {
    try {
        return detect(f, a, b, opt);
    } catch (const Error&) {
        return std::nullopt;
    }
}

namespace {

// Q1 zoomed on [lo, lo + w] (right of c): pure piece and image interval.
std::pair<PureMap, Interval> zoom_q1(const LorenzBase& f, double lo, double w) {
    const double c = f.c(), al = f.alpha();
    const double t0 = (lo - c) / (1.0 - c);
    const double img_lo = f.Q(1, lo);
    const double img_w = f.v() * std::pow(t0, al) * std::expm1(al * std::log1p(w / (lo - c)));
    return {PureMap::from_power_interval_width(al, lo - c, w), Interval(img_lo, std::min(1.0, img_lo + img_w))};
}

// Q0 zoomed on [lo, lo + w] (left of c).
std::pair<PureMap, Interval> zoom_q0(const LorenzBase& f, double lo, double w) {
    const double c = f.c(), al = f.alpha();
    const double t0 = (c - lo) / c;
    const double img_lo = lo == 0.0 ? 0.0 : f.Q(0, lo);
    const double img_w = -f.u() * std::pow(t0, al) * std::expm1(al * std::log1p(-w / (c - lo)));
    return {PureMap::from_power_interval_width(al, lo - c, w), Interval(img_lo, std::min(1.0, img_lo + img_w))};
}

}  // namespace

LorenzMap renormalize(const LorenzMap& f, const ReturnStructure& rs, bool prune) {
    const double c = f.c(), al = f.alpha();
    const double p = rs.p, q = rs.q;
    const double cw = q - p;
    const double c_new = (c - p) / cw;
    // |Q(L)| = u((c-p)/c)^alpha, |Q(R)| = v((q-c)/(1-c))^alpha.
    const double u_new = std::min(1.0, f.u() * std::pow((c - p) / c, al) / rs.U.length());
    const double v_new = std::min(1.0, f.v() * std::pow((q - c) / (1.0 - c), al) / rs.V.length());

    const Decomposition& phi = f.phi_decomposition();
    const Decomposition& psi = f.psi_decomposition();

    Decomposition phi_new(al);
    {
        auto [z, img] = phi.zoom_with_image(rs.U);
        for (const auto& pc : z.pieces()) phi_new.push_back(pc.map, Origin::Phi, 0);
        for (int i = 1; i <= rs.a; ++i) {
            auto [qm, qimg] = zoom_q1(f, img.lo, img.length());
            phi_new.push_back(qm, Origin::Q1, static_cast<std::uint32_t>(i));
            auto [zp, pimg] = psi.zoom_with_image(qimg);
            for (const auto& pc : zp.pieces()) phi_new.push_back(pc.map, Origin::Psi, static_cast<std::uint32_t>(i));
            img = pimg;
        }
    }
    Decomposition psi_new(al);
    {
        auto [z, img] = psi.zoom_with_image(rs.V);
        for (const auto& pc : z.pieces()) psi_new.push_back(pc.map, Origin::Psi, 0);
        for (int j = 1; j <= rs.b; ++j) {
            auto [qm, qimg] = zoom_q0(f, img.lo, img.length());
            psi_new.push_back(qm, Origin::Q0, static_cast<std::uint32_t>(j));
            auto [zp, pimg] = phi.zoom_with_image(qimg);
            for (const auto& pc : zp.pieces()) psi_new.push_back(pc.map, Origin::Phi, static_cast<std::uint32_t>(j));
            img = pimg;
        }
    }
    if (prune) {
        phi_new = phi_new.pruned();
        psi_new = psi_new.pruned();
    }
    return LorenzMap(al, u_new, v_new, c_new, std::move(phi_new), std::move(psi_new));
}

LorenzMap renormalize(const LorenzMap& f, int a, int b) { return renormalize(f, detect(f, a, b)); }

namespace {

// Z(g; I) for g = (branch)^times o d on I, as a diffeomorphism of [0,1].
class ZoomedReturn final : public Diffeo {
public:
    ZoomedReturn(std::shared_ptr<const GeneralLorenzMap> f, bool left, int times, Interval I)
        : f_(std::move(f)), left_(left), times_(times), I_(I) {
        g0_ = g(I_.lo, nullptr);
        g1_ = g(I_.hi, nullptr);
    }
    double value(double t) const override {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return (g(I_.from_unit(t), nullptr) - g0_) / (g1_ - g0_);
    }
    double deriv(double t) const override {
        double d;
        g(I_.from_unit(std::clamp(t, 0.0, 1.0)), &d);
        return d * I_.length() / (g1_ - g0_);
    }
    double inverse(double y) const override {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        double z = g0_ + y * (g1_ - g0_);
        const int branch = left_ ? 1 : 0;
        for (int k = 0; k < times_; ++k) z = f_->inverse_branch(branch, z);
        const double x = left_ ? f_->phi_inverse(z) : f_->psi_inverse(z);
        return std::clamp(I_.to_unit(x), 0.0, 1.0);
    }

private:
    std::shared_ptr<const GeneralLorenzMap> f_;
    bool left_;
    int times_;
    Interval I_;
    double g0_, g1_;
    double g(double x, double* d) const {
        double y = left_ ? f_->phi(x) : f_->psi(x);
        double dd = left_ ? f_->phi_deriv(x) : f_->psi_deriv(x);
        const int branch = left_ ? 1 : 0;
        for (int k = 0; k < times_; ++k) {
            dd *= f_->deriv_branch(branch, y);
            y = f_->eval_branch(branch, y);
        }
        if (d) *d = dd;
        return y;
    }
};

}  // namespace

GeneralLorenzMap renormalize_plain(const GeneralLorenzMap& f, const ReturnStructure& rs) {
    const double c = f.c(), al = f.alpha();
    const double p = rs.p, q = rs.q;
    const double c_new = (c - p) / (q - p);
    const double u_new = std::min(1.0, f.u() * std::pow((c - p) / c, al) / rs.U.length());
    const double v_new = std::min(1.0, f.v() * std::pow((q - c) / (1.0 - c), al) / rs.V.length());
    auto fp = std::make_shared<const GeneralLorenzMap>(f);
    return GeneralLorenzMap(al, u_new, v_new, c_new, std::make_shared<ZoomedReturn>(fp, true, rs.a, rs.U),
                            std::make_shared<ZoomedReturn>(fp, false, rs.b, rs.V));
}

double first_return_oracle(const LorenzBase& f, const ReturnStructure& rs, double x) {
    const double cw = rs.q - rs.p;
    const double c_new = (f.c() - rs.p) / cw;
    if (x == c_new) throw Error(ErrorCode::CriticalPoint, "return map undefined at the critical point");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Domain, "argument outside [0,1]");
    const bool left = x < c_new;
    double y = rs.p + x * cw;
    const int first = left ? 0 : 1, rest = left ? 1 : 0, n = left ? rs.a : rs.b;
    y = f.eval_branch(first, y);
    for (int k = 0; k < n; ++k) {
        const bool on_rest = rest == 1 ? y > f.c() + kCriticalTol : y < f.c() - kCriticalTol;
        if (!on_rest) throw Error(ErrorCode::WordViolation, "orbit left the expected word");
        y = f.eval_branch(rest, y);
    }
    return (y - rs.p) / cw;
}

std::vector<std::pair<int, int>> detect_search(const LorenzBase& f, int a_max, int b_max) {
    std::vector<std::pair<int, int>> out;
    if (a_max < 1 || b_max < 1 || !f.nontrivial()) return out;
    const std::size_t na = static_cast<std::size_t>(a_max), nb = static_cast<std::size_t>(b_max);
    const auto ok = parallel_map<char>(na * nb, [&](std::size_t i) {
        return static_cast<char>(try_detect(f, static_cast<int>(i / nb) + 1, static_cast<int>(i % nb) + 1).has_value());
    });
    for (std::size_t i = 0; i < ok.size(); ++i)
        if (ok[i]) out.emplace_back(static_cast<int>(i / nb) + 1, static_cast<int>(i % nb) + 1);
    return out;
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const Check& Report::at(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw Error(ErrorCode::InvalidArgument, "no check named " + name);
}

Report verify_K_membership(const LorenzMap& f, int b_lower, double sigma, double beta, double theta) {
    if (b_lower < 1 || !(sigma > 0.0 && sigma < 1.0) || !(theta > 0.0))
        throw Error(ErrorCode::InvalidArgument, "invalid window parameters");
    const double al = f.alpha();
    const double eps = 1.0 - f.c();
    const double delta = 1.0 / (static_cast<double>(b_lower) * b_lower);
    const double lo = std::pow(al, -static_cast<double>(b_lower) / al);
    const double hi = theta * std::pow(al, -static_cast<double>(b_lower) * sigma / (al * al));
    Report rep;
    rep.checks.push_back({"beta_range", beta, (sigma / al) * (sigma / al), beta > 0.0 && beta < (sigma / al) * (sigma / al),
                          "0 < beta < (sigma/alpha)^2"});
    rep.checks.push_back({"eps_lower", eps, lo, eps >= lo, "alpha^(-b/alpha) <= eps"});
    rep.checks.push_back({"eps_upper", eps, hi, eps <= hi, "eps <= theta alpha^(-b sigma/alpha^2)"});
    const double dphi = f.phi_decomposition().distortion();
    const double dpsi = f.psi_decomposition().distortion();
    rep.checks.push_back({"distortion_phi", dphi, delta, dphi <= delta, "dist(phi) <= 1/b^2"});
    rep.checks.push_back({"distortion_psi", dpsi, delta, dpsi <= delta, "dist(psi) <= 1/b^2"});
    return rep;
}

Report verify_lemma_bounds(const LorenzMap& f, const ReturnStructure& rs) {
    const double al = f.alpha();
    const double eps = 1.0 - f.c();
    Report rep;
    const double lcv = f.lcv();
    rep.checks.push_back({"one_minus_lcv_over_eps2", (1.0 - lcv) / (eps * eps), 0.0, std::isfinite(lcv),
                          "(1 - lcv)/eps^2 bounded uniformly"});
    rep.checks.push_back({"rcv", f.rcv(), 0.0, f.rcv() >= 0.0, "rcv decays exponentially in b"});

    // D f1^{-a}(c) / (eps/alpha)^a.
    double y = f.c(), d1 = 1.0;
    for (int k = 0; k < rs.a; ++k) {
        const double x = f.inverse_branch(1, y);
        d1 /= f.deriv_branch(1, x);
        y = x;
    }
    const double r1 = d1 / std::pow(eps / al, rs.a);
    rep.checks.push_back({"df1_inv_a_ratio", r1, 0.0, r1 > 0.0, "D f1^{-a} comparable to (eps/alpha)^a"});
    // D f0^{-b}(c) / (alpha^{-b} eps^{-1 + alpha^{-b}}).
    y = f.c();
    double d0 = 1.0;
    for (int k = 0; k < rs.b; ++k) {
        const double x = f.inverse_branch(0, y);
        d0 /= f.deriv_branch(0, x);
        y = x;
    }
    const double ab = std::pow(al, -rs.b);
    const double r0 = d0 / (ab * std::pow(eps, -1.0 + ab));
    rep.checks.push_back({"df0_inv_b_ratio", r0, 0.0, r0 > 0.0, "D f0^{-b}(c) comparable to alpha^{-b} eps^{-1+alpha^{-b}}"});

    const LorenzMap g = renormalize(f, rs);
    const double dphi = g.phi_decomposition().distortion();
    const double dpsi = g.psi_decomposition().distortion();
    rep.checks.push_back({"distortion_phi_R", dphi, g.phi_decomposition().norm(), std::isfinite(dphi),
                          "dist(phi') small in the invariant window"});
    rep.checks.push_back({"distortion_psi_R", dpsi, g.psi_decomposition().norm(), std::isfinite(dpsi),
                          "dist(psi') small in the invariant window"});
    const double eps_r = 1.0 - g.c();
    rep.checks.push_back({"eps_R", eps_r, 0.0, eps_r > 0.0 && eps_r < 1.0, "eps(Rf) <= theta alpha^(-b sigma/alpha^2)"});
    return rep;
}

}  // namespace renormlab
