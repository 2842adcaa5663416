#include "renormlab/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "renormlab/renorm.hpp"

namespace renormlab {

namespace {

Interval pullback(const LorenzBase& f, char side, const Interval& J) {
    int br = side == '0' ? 0 : 1;
    return {f.inverse_branch(br, J.lo), f.inverse_branch(br, J.hi)};
}

// Relative slack plus a few ulps: node endpoints are recomputed along different orbits.
double containment_tol(const Interval& J) { return 1e-9 * J.length() + 1e-15; }

Interval image(const LorenzBase& f, int branch, const Interval& I) {
    return {f.eval_branch(branch, I.lo), f.eval_branch(branch, I.hi)};
}

ReturnStructure detect_smallest(const LorenzBase& g, MonotoneType& t) {
    for (int total = 2; total <= 24; ++total) {
        for (int a = 1; a < total; ++a) {
            int b = total - a;
            if (auto rs = try_detect(g, a, b)) {
                t = {a, b};
                return *rs;
            }
        }
    }
    throw Error(ErrorCode::NotNice, "no monotone renormalization with a + b <= 24");
}

void attach_parents(CoverLevel& child, const CoverLevel& parent) {
    const auto& P = parent.intervals;
    std::vector<std::vector<int>> kids(P.size());
    for (std::size_t k = 0; k < child.intervals.size(); ++k) {
        auto& ch = child.intervals[k];
        if (k > 0 && !(child.intervals[k - 1].I.hi < ch.I.lo))
            throw Error(ErrorCode::AmbiguousContainment, "overlapping intervals in generation " + std::to_string(child.n));
        auto it = std::upper_bound(P.begin(), P.end(), ch.I.lo,
                                   [](double x, const CoverInterval& ci) { return x < ci.I.lo; });
        if (it == P.begin())
            throw Error(ErrorCode::AmbiguousContainment, "interval left of the previous generation");
        int j = static_cast<int>(std::distance(P.begin(), it)) - 1;
        if (!(ch.I.hi <= P[j].I.hi))
            throw Error(ErrorCode::AmbiguousContainment, "interval straddles a parent boundary in generation " + std::to_string(child.n));
        ch.parent = j;
        kids[j].push_back(static_cast<int>(k));
    }
    for (std::size_t j = 0; j < P.size(); ++j) {
        const Interval& par = P[j].I;
        double L = par.length();
        if (kids[j].empty()) throw Error(ErrorCode::AmbiguousContainment, "parent without children");
        double left = par.lo;
        for (int k : kids[j]) {
            const Interval& I = child.intervals[k].I;
            child.interval_ratios.push_back(I.length() / L);
            if (I.lo > left) child.gaps.push_back({left, I.lo});
            child.gap_ratios.push_back((I.lo - left) / L);
            left = I.hi;
        }
        if (par.hi > left) child.gaps.push_back({left, par.hi});
        child.gap_ratios.push_back((par.hi - left) / L);
    }
}

void finish_level(CoverLevel& lv) {
    std::sort(lv.intervals.begin(), lv.intervals.end(),
              [](const CoverInterval& x, const CoverInterval& y) { return x.I.lo < y.I.lo; });
    lv.total_length = 0.0;
    for (const auto& ci : lv.intervals) lv.total_length += ci.I.length();
}

}  // namespace

std::pair<std::string, std::string> level_words(const std::vector<MonotoneType>& types, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > types.size())
        throw Error(ErrorCode::IndexOutOfRange, "level_words: level outside the type list");
    std::string w0 = "0" + std::string(types[0].a, '1');
    std::string w1 = "1" + std::string(types[0].b, '0');
    for (int k = 1; k < n; ++k) {
        std::string n0 = w0, n1 = w1;
        for (int i = 0; i < types[k].a; ++i) n0 += w1;
        for (int i = 0; i < types[k].b; ++i) n1 += w0;
        w0 = std::move(n0);
        w1 = std::move(n1);
    }
    return {w0, w1};
}

Covers build_covers(const LorenzMap& f, int depth, const std::vector<MonotoneType>& types) {
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "build_covers: depth must be >= 1");
    if (!types.empty() && types.size() < static_cast<std::size_t>(depth))
        throw Error(ErrorCode::InvalidArgument, "build_covers: fewer types than depth");
    Covers cv;
    cv.C.push_back(kUnit);
    CoverLevel l0;
    l0.n = 0;
    l0.intervals.push_back({kUnit, NodeKind::Unit, 0, -1});
    l0.total_length = 1.0;
    cv.levels.push_back(l0);
    cv.word0.emplace_back();
    cv.word1.emplace_back();

    LorenzMap g = f;
    double off = 0.0, scale = 1.0;
    for (int n = 0; n < depth; ++n) {
        MonotoneType t;
        ReturnStructure rs = !types.empty() ? (t = types[n], detect(g, t.a, t.b)) : detect_smallest(g, t);
        cv.types.push_back(t);
        cv.C.push_back({off + scale * rs.C.lo, off + scale * rs.C.hi});
        if (n + 1 < depth) {
            g = renormalize(g, rs);
            off += scale * rs.C.lo;
            scale *= rs.C.length();
        }
    }

    for (int n = 1; n <= depth; ++n) {
        auto [w0, w1] = level_words(cv.types, n);
        cv.word0.push_back(w0);
        cv.word1.push_back(w1);
        CoverLevel lv;
        lv.n = n;
        const Interval& Cn = cv.C[n];
        lv.intervals.push_back({Cn, NodeKind::C, 0, -1});
        for (int pass = 0; pass < 2; ++pass) {
            const std::string& w = pass == 0 ? w0 : w1;
            Interval J = Cn;
            for (int i = static_cast<int>(w.size()) - 1; i >= 1; --i) {
                J = pullback(f, w[i], J);
                lv.intervals.push_back({J, pass == 0 ? NodeKind::U : NodeKind::V, i, -1});
            }
        }
        finish_level(lv);
        attach_parents(lv, cv.levels.back());
        cv.levels.push_back(std::move(lv));
    }
    return cv;
}

DimensionEstimate box_dimension_estimate(const std::vector<CoverLevel>& levels) {
    if (levels.size() < 3) throw Error(ErrorCode::InsufficientLevels, "box dimension needs at least 3 levels");
    std::size_t m = levels.size();
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = -std::log(levels[i].mean_length());
        y[i] = std::log(static_cast<double>(levels[i].count()));
    }
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) throw Error(ErrorCode::InsufficientLevels, "mean lengths do not vary across levels");
    DimensionEstimate d;
    d.dimension = sxy / sxx;
    d.intercept = my - d.dimension * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double e = y[i] - (d.intercept + d.dimension * x[i]);
        ssr += e * e;
    }
    d.residual = std::sqrt(ssr / m);
    d.stderr_ = m > 2 ? std::sqrt(ssr / (m - 2) / sxx) : 0.0;
    d.ci_lo = d.dimension - 2 * d.stderr_;
    d.ci_hi = d.dimension + 2 * d.stderr_;
    return d;
}

std::vector<CoverLevel> middle_thirds_cover(int levels) {
    if (levels < 0 || levels > 20) throw Error(ErrorCode::InvalidArgument, "middle_thirds_cover: levels in [0,20]");
    std::vector<CoverLevel> out;
    CoverLevel l0;
    l0.intervals.push_back({kUnit, NodeKind::Unit, 0, -1});
    l0.total_length = 1.0;
    out.push_back(l0);
    for (int n = 1; n <= levels; ++n) {
        CoverLevel lv;
        lv.n = n;
        for (const auto& p : out.back().intervals) {
            double w = p.I.length() / 3.0;
            lv.intervals.push_back({{p.I.lo, p.I.lo + w}, NodeKind::Unit, 0, -1});
            lv.intervals.push_back({{p.I.hi - w, p.I.hi}, NodeKind::Unit, 0, -1});
        }
        finish_level(lv);
        attach_parents(lv, out.back());
        out.push_back(std::move(lv));
    }
    return out;
}

bool is_nice(const LorenzBase& f, const Interval& C, long cap) {
    double tol = 1e-9 * C.length();
    Interval inner{C.lo + tol, C.hi - tol};
    for (double e : {C.lo, C.hi}) {
        double x = e;
        for (long k = 1; k <= cap; ++k) {
            if (x == f.c()) throw Error(ErrorCode::HitCriticalPoint, "boundary orbit hits the critical point");
            x = f.eval(x);
            if (std::abs(x - e) <= tol) break;  // periodic endpoint: one full period checked
            if (inner.contains_open(x)) return false;
        }
    }
    return true;
}

TransferResult transfer(const LorenzBase& f, const Interval& C, double x, long cap) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Domain, "transfer: x outside [0,1]");
    for (long n = 0; n <= cap; ++n) {
        if (C.contains_open(x)) return {x, n};
        if (n == cap) break;
        if (x == f.c()) throw Error(ErrorCode::HitCriticalPoint, "transfer orbit hits the critical point");
        x = f.eval(x);
    }
    throw Error(ErrorCode::CapExceeded, "transfer: orbit did not enter C within the iteration cap");
}

TransferBranch transfer_branch(const LorenzBase& f, const Interval& C, double x, long cap) {
    TransferResult tr = transfer(f, C, x, cap);
    TransferBranch b;
    b.tau = tr.tau;
    double y = x;
    for (long k = 0; k < tr.tau; ++k) {
        b.word.push_back(y < f.c() ? '0' : '1');
        y = f.eval(y);
    }
    b.images.assign(tr.tau + 1, C);
    Interval J = C;
    for (long k = tr.tau - 1; k >= 0; --k) {
        J = pullback(f, b.word[k], J);
        b.images[k] = J;
    }
    return b;
}

WeakMarkovReport weak_markov_check(const Covers& cv) {
    WeakMarkovReport r;
    r.delta = std::numeric_limits<double>::infinity();
    std::vector<double> mins;
    for (std::size_t n = 0; n + 1 < cv.C.size(); ++n) {
        const Interval& A = cv.C[n];
        const Interval& B = cv.C[n + 1];
        if (!(A.lo < B.lo && B.hi < A.hi)) r.nested = false;
        double l = (B.lo - A.lo) / B.length(), h = (A.hi - B.hi) / B.length();
        r.ratios.push_back({l, h});
        mins.push_back(std::min(l, h));
        r.delta = std::min(r.delta, mins.back());
    }
    if (mins.size() >= 2) {
        double a = mins[mins.size() - 2], b = mins.back();
        r.last_change = std::abs(b - a) / std::max(std::abs(a), std::abs(b));
    }
    return r;
}

WeakMarkovReport weak_markov_check(const LorenzMap& f, int depth) {
    return weak_markov_check(build_covers(f, depth));
}

LoopGraph build_loop_graph(const LorenzMap& f, const Covers& cv, int level) {
    if (level < 1 || static_cast<std::size_t>(level) >= cv.levels.size())
        throw Error(ErrorCode::IndexOutOfRange, "build_loop_graph: level not built");
    LoopGraph g;
    g.n = level;
    g.nodes = cv.levels[level].intervals;
    int N = static_cast<int>(g.nodes.size());
    g.edges.assign(N, {});
    for (int i = 0; i < N; ++i) {
        const auto& nd = g.nodes[i];
        if (nd.kind == NodeKind::C) g.zero = i;
        if (nd.kind == NodeKind::U && nd.index == 1) g.one1 = i;
        if (nd.kind == NodeKind::V && nd.index == 1) g.one2 = i;
    }
    double c = f.c();
    for (int i = 0; i < N; ++i) {
        const Interval& I = g.nodes[i].I;
        std::vector<Interval> imgs;
        if (i == g.zero) {
            imgs.push_back(image(f, 0, {I.lo, c}));
            imgs.push_back(image(f, 1, {c, I.hi}));
        } else {
            if (I.contains(c)) throw Error(ErrorCode::AmbiguousContainment, "non-central node contains c");
            imgs.push_back(image(f, I.hi < c ? 0 : 1, I));
        }
        for (const Interval& im : imgs) {
            for (int j = 0; j < N; ++j) {
                const Interval& J = g.nodes[j].I;
                double ov = im.overlap(J);
                if (ov > 1e-9 * J.length()) {
                    if (!J.contains(im, containment_tol(J)))
                        throw Error(ErrorCode::AmbiguousContainment, "node image straddles a node boundary");
                    g.edges[i].push_back(j);
                }
            }
        }
    }
    for (int i = 0; i < N; ++i) {
        std::size_t want = i == g.zero ? 2 : 1;
        if (g.edges[i].size() != want) throw Error(ErrorCode::WordViolation, "loop graph out-degree mismatch");
    }
    for (int pass = 0; pass < 2; ++pass) {
        int v = pass == 0 ? g.one1 : g.one2;
        auto& loop = pass == 0 ? g.loop1 : g.loop2;
        while (v != g.zero) {
            loop.push_back(v);
            if (static_cast<int>(loop.size()) > N) throw Error(ErrorCode::WordViolation, "loop does not close");
            v = g.edges[v][0];
        }
        loop.push_back(g.zero);
    }
    std::vector<int> seen(N, 0);
    for (int v : g.loop1) seen[v] |= 1;
    for (int v : g.loop2) seen[v] |= 2;
    for (int i = 0; i < N; ++i) {
        if (seen[i] == 0) throw Error(ErrorCode::WordViolation, "node outside both loops");
        if (seen[i] == 3 && i != g.zero) throw Error(ErrorCode::WordViolation, "loops overlap away from zero");
    }
    return g;
}

WindingMatrix winding_matrix(const LorenzMap& f, const Covers& cv, int n) {
    LoopGraph gn = build_loop_graph(f, cv, n);
    LoopGraph gm = build_loop_graph(f, cv, n + 1);
    WindingMatrix w{};
    int heads[2] = {gn.one1, gn.one2};
    const std::vector<int>* loops[2] = {&gm.loop1, &gm.loop2};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int v : *loops[j])
                if (v != gm.zero && gm.nodes[v].parent == heads[i]) ++w[i][j];
    return w;
}

WindingMatrix winding_closed_form(MonotoneType next) {
    return {{{1, next.b}, {next.a, 1}}};
}

namespace {

std::array<double, 2> wmul(const WindingMatrix& W, const std::array<double, 2>& z) {
    return {W[0][0] * z[0] + W[0][1] * z[1], W[1][0] * z[0] + W[1][1] * z[1]};
}

std::array<double, 2> simplex(std::array<double, 2> z) {
    double s = z[0] + z[1];
    return {z[0] / s, z[1] / s};
}

}  // namespace

MeasureResult invariant_measure_from_winding(const std::vector<WindingMatrix>& W, long A1, long B1) {
    for (const auto& m : W)
        for (const auto& row : m)
            for (long e : row)
                if (e < 0) throw Error(ErrorCode::InvalidArgument, "winding matrices must be nonnegative");
    MeasureResult r;
    r.W = W;
    std::size_t M = W.size();
    for (std::size_t m = 1; m <= M; ++m) {
        std::array<double, 2> e1{1.0, 0.0}, e2{0.0, 1.0};
        for (std::size_t k = m; k-- > 0;) {
            e1 = simplex(wmul(W[k], e1));
            e2 = simplex(wmul(W[k], e2));
        }
        ConeWidth cw;
        cw.matrices = static_cast<int>(m);
        double t1 = std::atan2(e1[1], e1[0]), t2 = std::atan2(e2[1], e2[0]);
        cw.ray_lo = t1 <= t2 ? e1 : e2;
        cw.ray_hi = t1 <= t2 ? e2 : e1;
        cw.angular_width = std::abs(t1 - t2);
        r.widths.push_back(cw);
    }
    double width = r.widths.empty() ? std::atan2(1.0, 0.0) : r.widths.back().angular_width;
    r.unique = width < 1e-10;

    auto mass1 = [&](const std::array<double, 2>& z) { return A1 * z[0] + B1 * z[1] + z[0] + z[1]; };
    std::array<double, 2> lo = r.widths.empty() ? std::array<double, 2>{1.0, 0.0} : r.widths.back().ray_lo;
    std::array<double, 2> hi = r.widths.empty() ? std::array<double, 2>{0.0, 1.0} : r.widths.back().ray_hi;
    double mlo = mass1(lo), mhi = mass1(hi);
    r.extreme_lo = {lo[0] / mlo, lo[1] / mlo};
    r.extreme_hi = {hi[0] / mhi, hi[1] / mhi};

    // Directions zhat_n with zhat_n ~ W_n zhat_{n+1}; actual z_n = kappa_n zhat_n.
    std::vector<std::array<double, 2>> zh(M + 1);
    std::vector<double> nu(M + 1, 1.0);
    zh[M] = {0.5, 0.5};
    for (std::size_t k = M; k-- > 0;) {
        auto y = wmul(W[k], zh[k + 1]);
        nu[k] = y[0] + y[1];
        zh[k] = {y[0] / nu[k], y[1] / nu[k]};
    }
    double kappa = 1.0 / mass1(zh[0]);
    r.z.resize(M + 1);
    for (std::size_t k = 0; k <= M; ++k) {
        r.z[k] = {kappa * zh[k][0], kappa * zh[k][1]};
        if (k < M) kappa /= nu[k];
    }
    for (std::size_t k = 0; k < M; ++k) {
        auto y = wmul(W[k], r.z[k + 1]);
        for (int i = 0; i < 2; ++i) {
            double e = std::abs(r.z[k][i] - y[i]);
            r.push_forward_error = std::max(r.push_forward_error, e);
        }
    }
    r.total_mass_error = std::abs(mass1(r.z[0]) - 1.0);
    return r;
}

MeasureResult invariant_measure(const LorenzMap& f, int depth, const std::vector<MonotoneType>& types) {
    Covers cv = build_covers(f, depth, types);
    std::vector<WindingMatrix> W;
    for (int n = 1; n < depth; ++n) W.push_back(winding_matrix(f, cv, n));
    long A1 = 0, B1 = 0;
    for (const auto& ci : cv.levels[1].intervals) {
        if (ci.kind == NodeKind::U) ++A1;
        if (ci.kind == NodeKind::V) ++B1;
    }
    MeasureResult r = invariant_measure_from_winding(W, A1, B1);
    for (int n = 1; n <= depth; ++n) {
        const auto& z = r.z[n - 1];
        std::vector<double> w;
        for (const auto& ci : cv.levels[n].intervals)
            w.push_back(ci.kind == NodeKind::U ? z[0] : ci.kind == NodeKind::V ? z[1] : z[0] + z[1]);
        r.weights.push_back(std::move(w));
    }
    return r;
}

double measure_invariance_error(const LorenzMap& f, const Covers& cv, const MeasureResult& m, int level) {
    if (level < 1 || static_cast<std::size_t>(level) > m.weights.size())
        throw Error(ErrorCode::IndexOutOfRange, "measure_invariance_error: level without weights");
    const auto& nodes = cv.levels[level].intervals;
    const auto& w = m.weights[level - 1];
    double worst = 0.0;
    Interval range0{0.0, f.lcv()}, range1{f.rcv(), 1.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& I = nodes[i];
        if (I.index == 1 && I.kind != NodeKind::C) continue;  // loop heads
        std::vector<Interval> pre;
        for (int br = 0; br < 2; ++br) {
            const Interval& R = br == 0 ? range0 : range1;
            double lo = std::max(I.I.lo, R.lo), hi = std::min(I.I.hi, R.hi);
            if (lo < hi) pre.push_back({f.inverse_branch(br, lo), f.inverse_branch(br, hi)});
        }
        double mass = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const Interval& J = nodes[j].I;
            for (const Interval& P : pre) {
                double ov = P.overlap(J);
                if (ov <= 1e-9 * J.length()) continue;
                if (!P.contains(J, containment_tol(J)))
                    throw Error(ErrorCode::AmbiguousContainment, "preimage cuts a node");
                mass += w[j];
            }
        }
        worst = std::max(worst, std::abs(mass - w[i]));
    }
    return worst;
}

double hilbert_distance(const std::array<double, 2>& z, const std::array<double, 2>& zp) {
    for (double x : {z[0], z[1], zp[0], zp[1]}) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "hilbert_distance: non-finite input");
        if (!(x > 0.0)) throw Error(ErrorCode::BoundaryPoint, "hilbert_distance: point not inside the open cone");
    }
    // Points on the segment x1 + x2 = 1 from w' = (1,0) to w = (0,1), parametrized by the first coordinate.
    double s = z[0] / (z[0] + z[1]), sp = zp[0] / (zp[0] + zp[1]);
    double lo = std::min(s, sp), hi = std::max(s, sp);
    if (lo == hi) return 0.0;
    double zz = (z[0] * zp[1] > zp[0] * z[1] ? z[0] * zp[1] - zp[0] * z[1] : zp[0] * z[1] - z[0] * zp[1]) /
                ((z[0] + z[1]) * (zp[0] + zp[1]));
    double ww = 1.0, wz = lo, zw = 1.0 - hi;
    return std::log1p(zz * ww / (wz * zw));
}

double hilbert_contraction_bound(long a, long b) {
    double r = std::sqrt(static_cast<double>(a) * static_cast<double>(b));
    return (r - 1.0) / (r + 1.0);
}

double birkhoff_contraction(const WindingMatrix& W) {
    if (W[0][0] <= 0 || W[0][1] <= 0 || W[1][0] <= 0 || W[1][1] <= 0) return 1.0;
    double delta = std::abs(std::log(static_cast<double>(W[0][0]) * W[1][1] / (static_cast<double>(W[0][1]) * W[1][0])));
    return std::tanh(delta / 4.0);
}

double measured_contraction(const WindingMatrix& W, int pairs, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> base(-4.0, 4.0), sep(1e-4, 2e-4);
    double sup = 0.0;
    for (int k = 0; k < pairs; ++k) {
        double t = std::exp(base(rng)), d = sep(rng);
        std::array<double, 2> z{1.0, t}, zp{1.0, t * std::exp(d)};
        double num = hilbert_distance(wmul(W, z), wmul(W, zp));
        double den = hilbert_distance(z, zp);
        sup = std::max(sup, num / den);
    }
    return sup;
}

}  // namespace renormlab
