// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "renormlab/attractor.hpp"
#include "renormlab/error.hpp"
#include "support.hpp"

using namespace renormlab;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[320];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

template <class F>
void guarded(int id, const char* name, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("threw: ") + e.what());
    }
}

const MonotoneType kW{1, 2};

oracle::Lorenz as_oracle(const LorenzMap& f) {
    return {f.alpha(), f.u(), f.v(), f.c(), f.phi_decomposition().s_values(), f.psi_decomposition().s_values()};
}

std::string word_of(const oracle::Lorenz& o, oracle::ld x, int n) {
    std::string w;
    for (int k = 0; k < n; ++k) {
        w += x < o.c ? '0' : '1';
        x = o(x);
    }
    return w;
}

Slice decomposed_slice() {
    Slice s = Slice::identity(2.0, 0.5);
    s.phi = Decomposition::from_s(2.0, {0.3, -0.2, 0.1});
    s.psi = Decomposition::from_s(2.0, {-0.25, 0.15});
    return s;
}

void pure_exactness() {
    auto g = oracle::rng(1001);
    double worst = 0.0;
    const double alphas[] = {1.5, 2.0, 3.0};
    for (int k = 0; k < 1000; ++k) {
        double alpha = alphas[k % 3];
        double s = oracle::uniform(g, -5, 5), x = oracle::uniform(g, 0, 1);
        PureMap m(alpha, s);
        worst = std::max(worst, std::abs(PureMap(alpha, 0.0).value(x) - x));
        // grid-sampled sup log(D(x)/D(y)) through the generic diffeo path
        worst = std::max(worst, std::abs(distortion(static_cast<const Diffeo&>(m)) - std::abs(s)));
        long double r = std::expm1(static_cast<long double>(s) / (alpha - 1));
        long double N = r * (alpha - 1) / (1 + r * x);
        // relative once |N| > 1: for alpha = 1.5 and s = 5, N(0) is about 1.1e4
        worst = std::max(worst, static_cast<double>(std::fabs(m.nonlinearity(x) - N) / std::max(1.0L, std::fabs(N))));
    }
    report(1, "pure-map exactness", worst < 1e-12, fmt("max error %.3e over 1000 samples (bound 1e-12)", worst));
}

void nonlinearity_inverse_check() {
    Decomposition d = Decomposition::from_s(2.0, {0.8, -1.3, 0.4});
    auto phi = compose(d);
    GridDiffeo g = GridDiffeo::sample(2.0, *phi);
    double round = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        round = std::max(round, std::abs(g.value(x) - phi->value(x)));
    }
    double closed = 0.0;
    for (double k : {-4.0, -1.0, 0.5, 3.0}) {
        GridDiffeo c = GridDiffeo::from_function(2.0, [&](double) { return k; });
        for (int i = 0; i <= 1000; ++i) {
            double x = i / 1000.0;
            closed = std::max(closed, std::abs(c.value(x) - std::expm1(k * x) / std::expm1(k)));
        }
    }
    report(2, "nonlinearity inverse", round < 1e-8 && closed < 1e-8,
           fmt("round trip %.3e, constant closed form %.3e (bound 1e-8)", round, closed));
}

void zoom_identities() {
    auto g = oracle::rng(1003);
    double pure_err = 0.0;
    for (int k = 0; k < 200; ++k) {
        double s = oracle::uniform(g, -5, 5), a = oracle::uniform(g, 0, 0.9), w = oracle::uniform(g, 1e-3, 1 - a);
        PureMap m(2.0, s);
        // sup of |N| on I sits at an endpoint; the zoom rescales it by |I|
        double sup_I = std::max(std::abs(m.nonlinearity(a)), std::abs(m.nonlinearity(a + w)));
        double z = zoom_pure(m, {a, a + w}).norm();
        pure_err = std::max(pure_err, std::abs(z - w * sup_I) / std::max(1.0, z));
    }
    int held = 0;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> s(1 + k % 6);
        for (auto& v : s) v = oracle::uniform(g, -1.5, 1.5);
        Decomposition d = Decomposition::from_s(2.0, s);
        double a = oracle::uniform(g, 0, 0.9), w = oracle::uniform(g, 1e-4, 1 - a);
        double img = static_cast<double>(oracle::compose(2.0L, s, a + w) - oracle::compose(2.0L, s, a));
        double bound = std::exp(d.norm()) * std::min(w, img) * d.norm();
        if (zoom_decomposition(d, {a, a + w}).norm() <= bound * (1 + 1e-12)) ++held;
    }
    report(3, "zoom identities", pure_err < 1e-10 && held == 100,
           fmt("pure zoom norm error %.3e (bound 1e-10); decomposition inequality held %d/100", pure_err, held));
}

LorenzMap decomposed_center() {
    Slice s = decomposed_slice();
    return s.at(island_solve(s, kW, {0.75, 0.75}).lambda);
}

void semi_conjugacy() {
    LorenzMap f = decomposed_center();
    std::size_t pieces = std::max(f.phi_decomposition().size(), f.psi_decomposition().size());
    ReturnStructure rs = detect(f, 1, 2);
    GeneralLorenzMap OR = compose_map(renormalize(f, rs));
    GeneralLorenzMap RO = renormalize_plain(compose_map(f), rs);
    auto g = oracle::rng(1004);
    double worst = 0.0;
    int n = 0;
    while (n < 100) {
        double x = oracle::uniform(g, 0, 1);
        if (std::abs(x - OR.c()) < 1e-9) continue;
        worst = std::max(worst, std::abs(f_eval(OR, x) - f_eval(RO, x)));
        ++n;
    }
    report(4, "semi-conjugacy", pieces <= 8 && worst < 1e-9,
           fmt("max |O(Rf) - R(Of)| = %.3e at 100 points (bound 1e-9), %zu pieces", worst, pieces));
}

void renormalization_correctness() {
    Slice id = Slice::identity(2.0, 0.5);
    LorenzMap f = id.at(island_solve(id, kW, {0.75, 0.75}).lambda);
    ReturnStructure rs = detect(f, 1, 2);
    LorenzMap g = renormalize(f, rs);
    oracle::Lorenz o = as_oracle(f);
    auto r = oracle::rng(1005);
    double worst = 0.0;
    int n = 0;
    while (n < 200) {
        double x = oracle::uniform(r, 0, 1);
        if (std::abs(x - g.c()) < 1e-9) continue;
        worst = std::max(worst, std::abs(f_eval(g, x) - first_return_oracle(f, rs, x)));
        ++n;
    }
    double cerr = std::abs(g.c() * rs.C.length() - rs.L.length());
    bool words = word_of(o, rs.L.mid(), 2) == "01" && word_of(o, rs.R.mid(), 3) == "100";
    bool inv = rs.period_error < 1e-11 && rs.return_left > f.c() && rs.return_left <= rs.q &&
               rs.return_right < f.c() && rs.return_right >= rs.p && words;
    report(5, "renormalization correctness", worst < 1e-9 && cerr < 1e-14 && inv,
           fmt("oracle mismatch %.3e (1e-9), |c'|C|-|L|| %.3e (1e-14), period error %.3e (1e-11)", worst, cerr,
               rs.period_error) + (words ? ", words 01/100" : ", word check failed"));
}

void triv_curves() {
    Slice s = Slice::identity(2.0, 0.5);
    double worst = 0.0;
    int left = 0, right = 0;
    for (int k = 0; k < 50; ++k) {
        double t = 0.6 + 0.4 * (k + 0.5) / 50.0;
        double u = triv_left_curve(s, 1, t);
        oracle::Lorenz o = as_oracle(s.at(u, t));
        oracle::ld x = o(o.left_limit());
        worst = std::max(worst, static_cast<double>(std::fabs(x - o.c)));
        ++left;
        double v = triv_right_curve(s, 2, t);
        oracle::Lorenz p = as_oracle(s.at(t, v));
        oracle::ld y = p.right_limit();
        for (int j = 0; j < 2; ++j) y = p(y);
        worst = std::max(worst, static_cast<double>(std::fabs(y - p.c)));
        ++right;
    }
    double u1 = triv_left_curve(s, 1, 1.0);
    report(6, "triv curves", worst < 1e-10 && std::abs(u1 - 0.8535533906) < 1e-9 && left == 50 && right == 50,
           fmt("orbit residual %.3e on 50+50 samples (1e-10); u(a=1,v=1) = %.10f", worst, u1));
}

void island_solving() {
    Slice s = Slice::identity(2.0, 0.5);
    double worst = 0.0, min_det = 1e300;
    for (Vec2 t : {Vec2{0.75, 0.75}, Vec2{0.6, 0.6}, Vec2{0.9, 0.6}, Vec2{0.6, 0.9}, Vec2{0.88, 0.93}}) {
        IslandSolution sol = island_solve(s, kW, t);
        Vec2 r = R_map(s, sol.lambda, kW);
        worst = std::max({worst, std::abs(r[0] - t[0]), std::abs(r[1] - t[1])});
        auto J = fd_jacobian2([&](const Vec2& l) { return R_map(s, l, kW); }, sol.lambda, 1e-7);
        min_det = std::min(min_det, J[0][0] * J[1][1] - J[0][1] * J[1][0]);
    }
    report(7, "island solving", worst < 1e-8 && min_det > 0.0,
           fmt("max residual %.3e (1e-8), min det %.4g over 5 targets", worst, min_det));
}

void cascade_check() {
    Slice s = Slice::identity(2.0, 0.5);
    std::vector<MonotoneType> types(6, kW);
    CascadeResult r = cascade(s, types);
    bool nest = r.boxes.size() == 6;
    for (std::size_t k = 0; k + 1 < r.boxes.size(); ++k) nest = nest && r.boxes[k].contains(r.boxes[k + 1]);
    double max_ratio = 0.0;
    for (double q : r.diameter_ratios) max_ratio = std::max(max_ratio, q);
    LorenzMap f = r.map_at(s);
    int detected = 0;
    for (std::size_t k = 0; k < 6; ++k)
        if (try_detect(renormalize_n(f, types, k), 1, 2)) ++detected;
    report(8, "cascade", nest && r.diameter_ratios.size() == 5 && max_ratio < 1.0 && detected == 6,
           fmt("boxes nest: %s; max diameter ratio %.4f; detect passed %d/6", nest ? "yes" : "no", max_ratio, detected));
}

void derivative_diagnostics() {
    Slice id = Slice::identity(2.0, 0.5);
    Slice b = decomposed_slice();
    std::vector<LorenzMap> maps{id.at(island_solve(id, kW, {0.75, 0.75}).lambda),
                                id.at(island_solve(id, kW, {0.65, 0.85}).lambda),
                                b.at(island_solve(b, kW, {0.75, 0.75}).lambda)};
    bool signs = true;
    double min_det = 1e300;
    for (const LorenzMap& f : maps) {
        FDJacobian J = jacobian_fd(f, kW, {});
        min_det = std::min(min_det, J.det_M1);
        signs = signs && J.det_M1 > 0.0 && J.du_dc < 0.0 && J.dv_dc > 0.0;
    }
    LorenzMap deep = fixed_point_approx(kW, id, 4).map;
    ConeReport c = cone_check(deep, kW, 1.0);
    report(9, "derivative diagnostics", signs && c.into_cone() && c.expanding(),
           fmt("min det M1 %.4g, c-partial signs %s; cone output ratio %.4f (< 1), expansion %.4f (> 1)", min_det,
               signs ? "ok" : "wrong", c.max_output_ratio, c.min_expansion));
}

LorenzMap cascade_map(int depth) {
    Slice s = Slice::identity(2.0, 0.5);
    return cascade(s, std::vector<MonotoneType>(depth, kW), false).map_at(s);
}

void winding_check() {
    LorenzMap f = cascade_map(5);
    Covers cv = build_covers(f, 5, std::vector<MonotoneType>(5, kW));
    int equal = 0;
    for (int n = 1; n < 5; ++n)
        if (winding_matrix(f, cv, n) == winding_closed_form(cv.types[n])) ++equal;
    WindingMatrix W{{{1, 2}, {1, 1}}};
    double k = (std::sqrt(2.0) - 1) / (std::sqrt(2.0) + 1);
    double m = measured_contraction(W, 10000);
    report(10, "winding matrices", equal == 4 && m <= k + 1e-12 && k - m < 1e-6,
           fmt("closed form at %d/4 levels; measured sup %.9f vs k %.9f", equal, m, k));
}

void invariant_measure_check(const LorenzMap& f, const Covers& cv) {
    MeasureResult m = invariant_measure(f, 6, std::vector<MonotoneType>(6, kW));
    double width = m.widths.back().angular_width;
    double inv = measure_invariance_error(f, cv, m, 1);
    report(11, "invariant measure", width < 1e-10 && inv < 1e-10 && m.total_mass_error < 1e-12,
           fmt("cone width at depth 6 %.3e (bound 1e-10); invariance on level 1 %.3e; mass error %.3e", width, inv,
               m.total_mass_error));
}

void attractor_statistics(const Covers& cv) {
    bool decreasing = true, ratios = true;
    for (std::size_t n = 1; n < cv.levels.size(); ++n) {
        decreasing = decreasing && cv.levels[n].total_length < cv.levels[n - 1].total_length;
        for (double r : cv.levels[n].interval_ratios) ratios = ratios && r > 0.0 && r < 1.0;
        for (double r : cv.levels[n].gap_ratios) ratios = ratios && r > 0.0 && r < 1.0;
    }
    double mt = box_dimension_estimate(middle_thirds_cover(10)).dimension;
    double d = box_dimension_estimate(cv.levels).dimension;
    bool ok = decreasing && ratios && std::abs(mt - std::log(2.0) / std::log(3.0)) < 0.01 && d > 0.0 && d < 1.0;
    report(12, "attractor statistics", ok,
           fmt("middle thirds %.5f (log2/log3 = %.5f), cascade estimate %.4f", mt, std::log(2.0) / std::log(3.0), d) +
               (decreasing ? ", lengths decreasing" : ", lengths NOT decreasing") +
               (ratios ? ", ratios in (0,1)" : ", ratio outside (0,1)"));
}

void transfer_check(const LorenzMap& f, const Covers& cv) {
    const Interval& C = cv.C[2];
    bool zero = true;
    for (int i = 1; i < 20; ++i) {
        TransferResult t = transfer(f, C, C.from_unit(i / 20.0));
        zero = zero && t.tau == 0;
    }
    auto g = oracle::rng(1013);
    int branches = 0, good = 0;
    while (branches < 50) {
        double x = oracle::uniform(g, 0, 1);
        TransferBranch b;
        try {
            b = transfer_branch(f, C, x);
        } catch (const Error&) {
            continue;
        }
        ++branches;
        bool ok = true;
        for (long i = 0; i <= b.tau && ok; ++i)
            for (long j = i + 1; j <= b.tau && ok; ++j)
                ok = b.images[i].overlap(b.images[j]) <= 1e-12 * std::min(b.images[i].length(), b.images[j].length());
        for (int k = 1; k < 8 && ok; ++k) {
            TransferResult t = transfer(f, C, b.images[0].from_unit(0.02 + 0.96 * k / 8.0));
            ok = t.tau == b.tau && C.contains_open(t.T);
        }
        if (ok) ++good;
    }
    report(13, "transfer map", zero && good == 50,
           fmt("tau = 0 on C: %s; constant and disjoint on %d/50 branches", zero ? "yes" : "no", good));
}

}  // namespace

int main() {
    guarded(1, "pure-map exactness", pure_exactness);
    guarded(2, "nonlinearity inverse", nonlinearity_inverse_check);
    guarded(3, "zoom identities", zoom_identities);
    guarded(4, "semi-conjugacy", semi_conjugacy);
    guarded(5, "renormalization correctness", renormalization_correctness);
    guarded(6, "triv curves", triv_curves);
    guarded(7, "island solving", island_solving);
    guarded(8, "cascade", cascade_check);
    guarded(9, "derivative diagnostics", derivative_diagnostics);
    guarded(10, "winding matrices", winding_check);
    LorenzMap f6 = cascade_map(6);
    Covers cv6 = build_covers(f6, 6, std::vector<MonotoneType>(6, kW));
    guarded(11, "invariant measure", [&] { invariant_measure_check(f6, cv6); });
    guarded(12, "attractor statistics", [&] { attractor_statistics(cv6); });
    guarded(13, "transfer map", [&] { transfer_check(f6, cv6); });
    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
