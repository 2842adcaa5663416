#include "renormlab/param.hpp"

#include <cmath>
#include <random>

#include "renormlab/parallel.hpp"

namespace renormlab {

Slice Slice::identity(double alpha, double c) { return Slice{alpha, c, Decomposition(alpha), Decomposition(alpha)}; }

Slice Slice::of(const LorenzMap& f) {
    return Slice{f.alpha(), f.c(), f.phi_decomposition(), f.psi_decomposition()};
}

double triv_left_curve(const Slice& s, int a, double v) {
    if (a < 0) throw Error(ErrorCode::InvalidArgument, "a must be nonnegative");
    double y = s.c;
    for (int k = 0; k < a; ++k) {
        const double z = s.psi.apply_inverse(y);
        if (!(z >= 1.0 - v) || !(z <= 1.0)) throw Error(ErrorCode::CurveUndefined, "curve undefined here");
        y = q_inverse(1, 1.0, v, s.c, s.alpha, z);
        if (!(y > s.c && y < 1.0)) throw Error(ErrorCode::CurveUndefined, "preimage leaves (c,1)");
    }
    return s.phi.apply_inverse(y);
}

double triv_right_curve(const Slice& s, int b, double u) {
    if (b < 0) throw Error(ErrorCode::InvalidArgument, "b must be nonnegative");
    double y = s.c;
    for (int k = 0; k < b; ++k) {
        const double z = s.phi.apply_inverse(y);
        if (!(z <= u) || !(z >= 0.0)) throw Error(ErrorCode::CurveUndefined, "curve undefined here");
        y = q_inverse(0, u, 1.0, s.c, s.alpha, z);
        if (!(y > 0.0 && y < s.c)) throw Error(ErrorCode::CurveUndefined, "preimage leaves (0,c)");
    }
    return 1.0 - s.psi.apply_inverse(y);
}

Vec2 triv_crossing(const Slice& s, MonotoneType w) {
    // Fixed-point iteration v <- h(g(v)); both curves are steep in complementary directions.
    double v = 1.0, u = 1.0;
    for (int it = 0; it < 500; ++it) {
        try {
            u = triv_left_curve(s, w.a, v);
            const double vn = triv_right_curve(s, w.b, u);
            if (std::fabs(vn - v) < 1e-16) {
                v = vn;
                break;
            }
            v = vn;
        } catch (const Error&) {
            throw Error(ErrorCode::NoIslandFound, "trivial-boundary curves do not cross");
        }
        if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::NoIslandFound, "trivial-boundary curves do not cross");
    }
    u = triv_left_curve(s, w.a, v);
    return {u, v};
}

Vec2 project_S(const LorenzBase& g) {
    return {1.0 - (1.0 - g.lcv()) / (2.0 * (1.0 - g.c())), 1.0 - g.rcv() / (2.0 * g.c())};
}

namespace {

bool in_square(const Vec2& l) { return l[0] >= 0.0 && l[0] <= 1.0 && l[1] >= 0.0 && l[1] <= 1.0; }

LorenzMap renormalize_chain(const LorenzMap& f, const std::vector<MonotoneType>& types, std::size_t k,
                            bool closed_last) {
    LorenzMap g = f;
    for (std::size_t i = 0; i < k; ++i) {
        DetectOptions o;
        o.closed = closed_last && i + 1 == k;
        const auto rs = detect(g, types[i].a, types[i].b, o);
        g = renormalize(g, rs);
    }
    return g;
}

}  // namespace

LorenzMap renormalize_n(const LorenzMap& f, const std::vector<MonotoneType>& types, std::size_t k) {
    if (k > types.size()) throw Error(ErrorCode::InvalidArgument, "not enough types for the requested depth");
    return renormalize_chain(f, types, k, false);
}

Vec2 R_map_depth(const Slice& s, const Vec2& lambda, const std::vector<MonotoneType>& types) {
    if (!in_square(lambda)) throw Error(ErrorCode::OffArchipelago, "parameter outside the unit square");
    try {
        const LorenzMap g = renormalize_chain(s.at(lambda), types, types.size(), true);
        return project_S(g);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) throw;
        throw Error(ErrorCode::OffArchipelago, std::string("off-archipelago: ") + e.what());
    }
}

Vec2 R_map(const Slice& s, const Vec2& lambda, MonotoneType w) { return R_map_depth(s, lambda, {w}); }

std::array<Vec2, 2> fd_jacobian2(const std::function<Vec2(const Vec2&)>& F, const Vec2& lambda, double h) {
    std::array<Vec2, 2> J{};
    std::optional<Vec2> f0;
    for (int j = 0; j < 2; ++j) {
        Vec2 lp = lambda, lm = lambda;
        lp[j] += h;
        lm[j] -= h;
        std::optional<Vec2> fp, fm;
        try { fp = F(lp); } catch (const Error&) {}
        try { fm = F(lm); } catch (const Error&) {}
        if (fp && fm) {
            for (int i = 0; i < 2; ++i) J[i][j] = ((*fp)[i] - (*fm)[i]) / (2.0 * h);
            continue;
        }
        if (!f0) f0 = F(lambda);
        if (fp) {
            for (int i = 0; i < 2; ++i) J[i][j] = ((*fp)[i] - (*f0)[i]) / h;
        } else if (fm) {
            for (int i = 0; i < 2; ++i) J[i][j] = ((*f0)[i] - (*fm)[i]) / h;
        } else {
            throw Error(ErrorCode::OffArchipelago, "both FD probes left the island");
        }
    }
    return J;
}

namespace {

double resid(const Vec2& a, const Vec2& b) { return std::max(std::fabs(a[0] - b[0]), std::fabs(a[1] - b[1])); }

IslandSolution newton2(const std::function<Vec2(const Vec2&)>& F, const Vec2& target, Vec2 lambda,
                       const SolveOptions& opt) {
    IslandSolution sol;
    Vec2 val;
    try {
        val = F(lambda);
    } catch (const Error&) {
        throw Error(ErrorCode::NoIslandFound, "solver start point is not renormalizable");
    }
    double res = resid(val, target);
    const double h = 1e-3 * opt.scale;
    // Broyden updates between FD Jacobians; a fresh FD Jacobian when the line search stalls.
    std::optional<std::array<Vec2, 2>> J;
    bool fresh = false;
    int it = 0;
    for (; it < opt.max_iter && res > opt.tol; ++it) {
        if (!J) {
            try {
                J = fd_jacobian2(F, lambda, h);
                fresh = true;
            } catch (const Error&) {
                break;
            }
        }
        const auto& M = *J;
        const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
        if (!(std::fabs(det) > 0.0) || !std::isfinite(det)) break;
        const double r0 = val[0] - target[0], r1 = val[1] - target[1];
        const Vec2 d{-(M[1][1] * r0 - M[0][1] * r1) / det, -(-M[1][0] * r0 + M[0][0] * r1) / det};
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k, t *= 0.5) {
            const Vec2 ln{lambda[0] + t * d[0], lambda[1] + t * d[1]};
            if (!in_square(ln)) continue;
            try {
                const Vec2 vn = F(ln);
                const double rn = resid(vn, target);
                if (rn < (1.0 - 1e-4 * t) * res) {
                    const Vec2 dl{ln[0] - lambda[0], ln[1] - lambda[1]};
                    const Vec2 df{vn[0] - val[0], vn[1] - val[1]};
                    const double nn = dl[0] * dl[0] + dl[1] * dl[1];
                    auto& U = *J;
                    for (int i = 0; i < 2; ++i) {
                        const double e = df[i] - (U[i][0] * dl[0] + U[i][1] * dl[1]);
                        for (int jj = 0; jj < 2; ++jj) U[i][jj] += e * dl[jj] / nn;
                    }
                    lambda = ln;
                    val = vn;
                    res = rn;
                    accepted = true;
                    fresh = false;
                    break;
                }
            } catch (const Error&) {
            }
            if (!fresh && k >= 3) break;  // stale Jacobian: refresh rather than crawl
        }
        if (!accepted) {
            if (fresh) break;
            J.reset();
        }
    }
    sol.lambda = lambda;
    sol.value = val;
    sol.residual = res;
    sol.iterations = it;
    return sol;
}

}  // namespace

IslandSolution solve_depth(const Slice& s, const std::vector<MonotoneType>& types, const Vec2& target,
                           const Vec2& lambda0, SolveOptions opt) {
    auto F = [&](const Vec2& l) { return R_map_depth(s, l, types); };
    return newton2(F, target, lambda0, opt);
}

IslandSolution island_solve(const Slice& s, MonotoneType w, const Vec2& target, SolveOptions opt) {
    if (!(target[0] >= 0.5 && target[0] <= 1.0 && target[1] >= 0.5 && target[1] <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "target must lie in S = [1/2,1]^2");
    const Vec2 corner = triv_crossing(s, w);
    auto F = [&](const Vec2& l) { return R_map(s, l, w); };
    // Step from the trivial corner into the island (toward (1,1)) until both FD probes fit.
    // Islands shrink fast with the return times; retry with finer scales when the guess is too coarse.
    Vec2 lambda{}, start{};
    bool found = false;
    const double coarsest = opt.scale;
    for (double sc = coarsest; sc >= 1e-6 * coarsest && !found; sc *= 0.1) {
        for (double d = 1e-2 * sc; d < 1.0 && !found; d *= 2.0) {
            lambda = {corner[0] + d, corner[1] + d};
            if (!in_square(lambda)) break;
            try {
                start = F(lambda);
                fd_jacobian2(F, lambda, 1e-3 * sc);
                found = true;
                opt.scale = sc;
            } catch (const Error&) {
            }
        }
    }
    if (!found) throw Error(ErrorCode::NoIslandFound, "no island found next to the trivial-curve crossing");
    // Continuation toward the target.
    constexpr int kSteps = 4;
    IslandSolution sol;
    for (int j = 1; j <= kSteps; ++j) {
        const double t = static_cast<double>(j) / kSteps;
        const Vec2 tj{start[0] + t * (target[0] - start[0]), start[1] + t * (target[1] - start[1])};
        SolveOptions o = opt;
        if (j < kSteps) o.tol = 1e-6;
        sol = newton2(F, tj, lambda, o);
        lambda = sol.lambda;
    }
    if (!(sol.residual <= std::max(opt.tol, 1e-8)))
        throw Error(ErrorCode::NoIslandFound, "island solver did not converge");
    return sol;
}

namespace {

const Vec2 kCenter{0.75, 0.75};

IslandBox solve_box(const Slice& s, const std::vector<MonotoneType>& types, const Vec2& center_lambda,
                    double scale) {
    // Boundary of S, inset by 1e-7 so both FD probes stay on the island.
    constexpr double lo = 0.5 + 1e-7, hi = 1.0 - 1e-7;
    static const std::array<Vec2, 8> kBoundary{{{lo, lo}, {0.75, lo}, {hi, lo}, {hi, 0.75},
                                                {hi, hi}, {0.75, hi}, {lo, hi}, {lo, 0.75}}};
    IslandBox box;
    box.type = types.back();
    box.depth = static_cast<int>(types.size());
    box.lambda = center_lambda;
    box.u_lo = box.u_hi = center_lambda[0];
    box.v_lo = box.v_hi = center_lambda[1];
    const auto pts = parallel_map<Vec2>(kBoundary.size(), [&](std::size_t i) {
        SolveOptions o;
        o.scale = scale;
        o.tol = 1e-9;
        // Two-stage continuation from the center.
        const Vec2 mid{0.5 * (kCenter[0] + kBoundary[i][0]), 0.5 * (kCenter[1] + kBoundary[i][1])};
        const auto a = solve_depth(s, types, mid, center_lambda, o);
        return solve_depth(s, types, kBoundary[i], a.lambda, o).lambda;
    });
    for (const auto& l : pts) {
        box.u_lo = std::min(box.u_lo, l[0]);
        box.u_hi = std::max(box.u_hi, l[0]);
        box.v_lo = std::min(box.v_lo, l[1]);
        box.v_hi = std::max(box.v_hi, l[1]);
    }
    return box;
}

}  // namespace

CascadeResult cascade(const Slice& s, const std::vector<MonotoneType>& types, bool with_boxes) {
    if (types.empty()) throw Error(ErrorCode::InvalidArgument, "cascade needs at least one type");
    CascadeResult out;
    SolveOptions o1;
    const auto first = island_solve(s, types[0], kCenter, o1);
    Vec2 lambda = first.lambda;
    std::vector<MonotoneType> prefix{types[0]};
    // Without boxes, diameters are extrapolated from the measured per-level contraction.
    auto rough_box = [](const std::vector<MonotoneType>& pre, const Vec2& l, double diam) {
        IslandBox b;
        b.type = pre.back();
        b.depth = static_cast<int>(pre.size());
        b.lambda = l;
        b.u_lo = l[0] - 0.5 * diam;
        b.u_hi = l[0] + 0.5 * diam;
        b.v_lo = l[1] - 0.5 * diam;
        b.v_hi = l[1] + 0.5 * diam;
        return b;
    };
    out.boxes.push_back(with_boxes ? solve_box(s, prefix, lambda, o1.scale) : rough_box(prefix, lambda, 0.04));
    for (std::size_t k = 1; k < types.size(); ++k) {
        const double prev_diam = out.boxes.back().diameter();
        // Guess from the frozen slice of R^k F at the previous parameter.
        const LorenzMap g = renormalize_n(s.at(lambda), types, k);
        const Slice frozen = Slice::of(g);
        const auto local = island_solve(frozen, types[k], kCenter, o1);
        const Vec2 want = project_S(frozen.at(local.lambda));
        SolveOptions o;
        o.scale = prev_diam;
        o.tol = 1e-10;
        const auto pre = solve_depth(s, prefix, want, lambda, o);
        prefix.push_back(types[k]);
        o.scale = prev_diam * 0.05;
        auto sol = solve_depth(s, prefix, kCenter, pre.lambda, o);
        if (!(sol.residual < 1e-3)) throw Error(ErrorCode::NoIslandFound, "cascade solve failed at depth " + std::to_string(k + 1));
        lambda = sol.lambda;
        IslandBox box = with_boxes ? solve_box(s, prefix, lambda, o.scale) : rough_box(prefix, lambda, o.scale);
        if (box.diameter() < 1e-13)
            throw Error(ErrorCode::DepthAbort, "island diameter below the double-precision floor at depth " +
                                                   std::to_string(k + 1));
        out.diameter_ratios.push_back(box.diameter() / prev_diam);
        out.boxes.push_back(box);
    }
    out.lambda = lambda;
    return out;
}

FixedPointApprox fixed_point_residual(const LorenzMap& f, MonotoneType w) {
    const LorenzMap g = renormalize(f, w.a, w.b);
    FixedPointApprox out{f, g};
    out.du = std::fabs(f.u() - g.u());
    out.dv = std::fabs(f.v() - g.v());
    out.dc = std::fabs(f.c() - g.c());
    const double lo = std::min(f.c(), g.c()) - 1e-6, hi = std::max(f.c(), g.c()) + 1e-6;
    constexpr int kGrid = 256;
    for (int k = 0; k <= kGrid; ++k) {
        const double x = static_cast<double>(k) / kGrid;
        if (x > lo && x < hi) continue;
        out.dmap = std::max(out.dmap, std::fabs(f.eval(x) - g.eval(x)));
    }
    out.residual = std::max({out.du, out.dv, out.dc, out.dmap});
    return out;
}

FixedPointApprox fixed_point_approx(MonotoneType w, const Slice& s, int depth) {
    if (depth < 2) throw Error(ErrorCode::InvalidArgument, "depth must be at least 2");
    const std::vector<MonotoneType> types(static_cast<std::size_t>(depth), w);
    const auto cas = cascade(s, types, false);
    const LorenzMap fstar = renormalize_n(s.at(cas.lambda), types, static_cast<std::size_t>(depth / 2));
    return fixed_point_residual(fstar, w);
}

// ---------------------------------------------------------------- derivative diagnostics

namespace {

struct Tangent {
    double du = 0, dv = 0, dc = 0;
    std::vector<double> ds;  // phi pieces then psi pieces
};

LorenzMap perturbed(const LorenzMap& f, const Tangent& t, double h) {
    const auto& P = f.phi_decomposition();
    const auto& S = f.psi_decomposition();
    Decomposition phi(f.alpha()), psi(f.alpha());
    for (std::size_t k = 0; k < P.size(); ++k)
        phi.push_back(PureMap(f.alpha(), P.map(k).s() + (t.ds.empty() ? 0.0 : h * t.ds[k])));
    for (std::size_t k = 0; k < S.size(); ++k)
        psi.push_back(PureMap(f.alpha(), S.map(k).s() + (t.ds.empty() ? 0.0 : h * t.ds[P.size() + k])));
    return LorenzMap(f.alpha(), f.u() + h * t.du, f.v() + h * t.dv, f.c() + h * t.dc, std::move(phi), std::move(psi));
}

// Output coordinates (u', v', c', s'_phi..., s'_psi...) of R f without pruning.
std::vector<double> outputs(const LorenzMap& f, MonotoneType w) {
    const auto rs = detect(f, w.a, w.b);
    const LorenzMap g = renormalize(f, rs, false);
    std::vector<double> y{g.u(), g.v(), g.c()};
    for (double s : g.phi_decomposition().s_values()) y.push_back(s);
    for (double s : g.psi_decomposition().s_values()) y.push_back(s);
    return y;
}

std::vector<double> directional(const LorenzMap& f, MonotoneType w, const Tangent& t, double h) {
    std::vector<double> yp, ym;
    try {
        yp = outputs(perturbed(f, t, h), w);
        ym = outputs(perturbed(f, t, -h), w);
    } catch (const Error&) {
        throw Error(ErrorCode::TypeChangeUnderProbe, "type change under probe");
    }
    if (yp.size() != ym.size()) throw Error(ErrorCode::TypeChangeUnderProbe, "type change under probe");
    for (std::size_t i = 0; i < yp.size(); ++i) yp[i] = (yp[i] - ym[i]) / (2.0 * h);
    return yp;
}

std::vector<double> one_sided(const LorenzMap& f, MonotoneType w, const Tangent& t, double h,
                              const std::vector<double>& base) {
    std::vector<double> y;
    try {
        y = outputs(perturbed(f, t, h), w);
    } catch (const Error&) {
        throw Error(ErrorCode::TypeChangeUnderProbe, "type change under probe");
    }
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (y[i] - base[i]) / h;
    return y;
}

template <class Fn>
auto with_retries(double h, Fn&& fn) {
    for (int attempt = 0;; ++attempt) {
        try {
            return fn(h);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TypeChangeUnderProbe || attempt >= 4) throw;
            h *= 0.25;
        }
    }
}

// ||y|| on R x l1 x l1 with the max norm on products; s-weights are sup |d N mu_s / ds|.
double y_norm(const std::vector<double>& ds, double dc, const LorenzMap& ref_phi_psi_src,
              const std::vector<double>& s_ref, std::size_t n_phi) {
    (void)ref_phi_psi_src;
    double a = 0.0, b = 0.0;
    const double am1 = ref_phi_psi_src.alpha() - 1.0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const double w = std::exp(std::fabs(s_ref[k]) / am1) * std::fabs(ds[k]);
        (k < n_phi ? a : b) += w;
    }
    return std::max({std::fabs(dc), a, b});
}

}  // namespace

FDJacobian jacobian_fd(const LorenzMap& f, MonotoneType w, const std::vector<std::size_t>& directions, double h) {
    const std::size_t n = f.phi_decomposition().size() + f.psi_decomposition().size();
    for (auto d : directions)
        if (d >= n) throw Error(ErrorCode::IndexOutOfRange, "decomposition direction out of range");
    return with_retries(h, [&](double hh) {
        FDJacobian J;
        J.h = hh;
        J.type = w;
        J.directions = directions;
        const auto base = outputs(f, w);
        auto column = [&](Tangent t, double step) {
            return directional(f, w, t, step);
        };
        Tangent tu; tu.du = f.u();
        Tangent tv; tv.dv = f.v();
        Tangent tc; tc.dc = f.c();
        const auto cu = column(tu, hh), cv = column(tv, hh), cc = column(tc, hh);
        const auto fu = one_sided(f, w, tu, hh, base), bu = one_sided(f, w, tu, -hh, base);
        const auto fv = one_sided(f, w, tv, hh, base), bv = one_sided(f, w, tv, -hh, base);
        // Columns were taken along relative steps; divide by the scale to get plain partials.
        for (int i = 0; i < 2; ++i) {
            J.M1[i][0] = cu[i] / f.u();
            J.M1[i][1] = cv[i] / f.v();
            J.M1_forward[i][0] = fu[i] / f.u();
            J.M1_forward[i][1] = fv[i] / f.v();
            J.M1_backward[i][0] = bu[i] / f.u();
            J.M1_backward[i][1] = bv[i] / f.v();
        }
        J.det_M1 = J.M1[0][0] * J.M1[1][1] - J.M1[0][1] * J.M1[1][0];
        J.du_dc = cc[0] / f.c();
        J.dv_dc = cc[1] / f.c();
        J.dc_dc = cc[2] / f.c();
        for (auto d : directions) {
            Tangent t;
            t.ds.assign(n, 0.0);
            t.ds[d] = 1.0;
            const auto col = column(t, hh);
            J.x_columns.push_back({col[0], col[1]});
            J.y_columns.emplace_back(col.begin() + 2, col.end());
        }
        return J;
    });
}

ConeReport cone_check(const LorenzMap& f, MonotoneType w, double kappa, int samples, double h) {
    const std::size_t nphi = f.phi_decomposition().size();
    const std::size_t n = nphi + f.psi_decomposition().size();
    std::vector<double> s_in = f.phi_decomposition().s_values();
    for (double s : f.psi_decomposition().s_values()) s_in.push_back(s);

    const auto base = outputs(f, w);
    const std::size_t nphi_out = f.phi_decomposition().size() + static_cast<std::size_t>(w.a) * (1 + f.psi_decomposition().size());
    const std::vector<double> s_out(base.begin() + 3, base.end());

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Tangent> ts;
    {
        Tangent t; t.du = 1.0; t.ds.assign(n, 0.0); ts.push_back(t);
        Tangent t2; t2.dv = 1.0; t2.ds.assign(n, 0.0); ts.push_back(t2);
    }
    for (int k = 0; k < samples; ++k) {
        Tangent t;
        const double th = 2.0 * M_PI * (k + 0.5) / samples;
        const double m = std::max(std::fabs(std::cos(th)), std::fabs(std::sin(th)));
        t.du = std::cos(th) / m;
        t.dv = std::sin(th) / m;
        t.dc = unif(rng);
        t.ds.resize(n);
        for (auto& d : t.ds) d = unif(rng);
        const double yn = y_norm(t.ds, t.dc, f, s_in, nphi);
        const double target = kappa * (k % 2 == 0 ? 1.0 : 0.5 * (1.0 + unif(rng)));
        t.dc *= target / yn;
        for (auto& d : t.ds) d *= target / yn;
        ts.push_back(t);
    }

    ConeReport rep;
    rep.kappa = kappa;
    rep.min_expansion = std::numeric_limits<double>::infinity();
    const auto results = parallel_map<std::pair<double, double>>(ts.size(), [&](std::size_t i) {
        const Tangent& t = ts[i];
        const auto d = with_retries(h, [&](double hh) { return directional(f, w, t, hh); });
        const double xn_out = std::max(std::fabs(d[0]), std::fabs(d[1]));
        const std::vector<double> ds_out(d.begin() + 3, d.end());
        const double yn_out = y_norm(ds_out, d[2], f, s_out, nphi_out);
        const double xn_in = std::max(std::fabs(t.du), std::fabs(t.dv));
        const double yn_in = y_norm(t.ds, t.dc, f, s_in, nphi);
        return std::make_pair(yn_out / xn_out, std::max(xn_out, yn_out) / std::max(xn_in, yn_in));
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
        rep.max_output_ratio = std::max(rep.max_output_ratio, results[i].first);
        rep.min_expansion = std::min(rep.min_expansion, results[i].second);
        if (i == 0) {
            rep.x_axis_output_ratio = results[i].first;
            rep.x_axis_expansion = results[i].second;
        }
    }
    rep.samples = static_cast<int>(results.size());
    // Zero tangent: both probes coincide with f.
    Tangent zero;
    zero.ds.assign(n, 0.0);
    for (double v : directional(f, w, zero, h))
        if (v != 0.0) rep.zero_maps_to_zero = false;
    return rep;
}

}  // namespace renormlab
