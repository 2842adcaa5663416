#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "renormlab/error.hpp"
#include "renormlab/param.hpp"
#include "support.hpp"

using namespace renormlab;

namespace {

const MonotoneType kW{1, 2};

oracle::Lorenz as_oracle(const Slice& s, double u, double v) {
    return {s.alpha, u, v, s.c, s.phi.s_values(), s.psi.s_values()};
}

Slice bumpy_slice() {
    Slice s = Slice::identity(2.0, 0.5);
    s.phi = Decomposition::from_s(2.0, {0.2, -0.1});
    s.psi = Decomposition::from_s(2.0, {-0.15});
    return s;
}

const FixedPointApprox& depth4() {
    static const FixedPointApprox fp = fixed_point_approx(kW, Slice::identity(2.0, 0.5), 4);
    return fp;
}

}  // namespace

TEST_CASE("trivial-boundary curves") {
    Slice id = Slice::identity(2.0, 0.5);
    CHECK(std::abs(triv_left_curve(id, 1, 1.0) - 0.8535533906) < 1e-9);
    CHECK(std::abs(triv_left_curve(id, 1, 1.0) - (1 + std::sqrt(0.5)) / 2) < 1e-15);
    Slice b = bumpy_slice();
    CHECK(std::abs(triv_left_curve(b, 0, 0.7) - triv_left_curve(b, 0, 0.9)) == 0.0);
    CHECK(std::abs(triv_left_curve(b, 0, 0.7) - b.phi.apply_inverse(0.5)) < 1e-15);

    for (const Slice* s : {&id, &b}) {
        auto g = oracle::rng(51);
        int left = 0, right = 0;
        for (int k = 0; k < 200 && (left < 50 || right < 50); ++k) {
            double t = oracle::uniform(g, 0.6, 1.0);
            if (left < 50) {
                double u = triv_left_curve(*s, 1, t);
                oracle::Lorenz o = as_oracle(*s, u, t);
                oracle::ld x = o.left_limit();
                x = o(x);
                // F^{a+1}(c-) = c with a = 1
                REQUIRE(std::abs(static_cast<double>(x) - s->c) < 1e-10);
                ++left;
            }
            try {
                double v = triv_right_curve(*s, 2, t);
                oracle::Lorenz o = as_oracle(*s, t, v);
                oracle::ld x = o.right_limit();
                for (int j = 0; j < 2; ++j) x = o(x);
                REQUIRE(std::abs(static_cast<double>(x) - s->c) < 1e-10);
                ++right;
            } catch (const Error& e) {
                REQUIRE(e.code() == ErrorCode::CurveUndefined);
            }
        }
        CHECK(left == 50);
        CHECK(right == 50);
    }
    CHECK_THROWS_AS(triv_left_curve(id, 1, 0.3), Error);
}

TEST_CASE("projection onto S") {
    CHECK(project_S(LorenzMap(2.0, 1.0, 1.0, 0.4))[0] == 1.0);
    CHECK(project_S(LorenzMap(2.0, 1.0, 1.0, 0.4))[1] == 1.0);
    CHECK(project_S(LorenzMap(2.0, 0.4, 0.6, 0.4))[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(project_S(LorenzMap(2.0, 0.4, 0.6, 0.4))[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("island solving") {
    Slice s = Slice::identity(2.0, 0.5);
    IslandSolution c = island_solve(s, kW, {0.75, 0.75});
    CHECK(c.residual < 1e-8);
    CHECK(try_detect(s.at(c.lambda), 1, 2).has_value());

    SUBCASE("interior targets: residual and orientation") {
        for (Vec2 t : {Vec2{0.75, 0.75}, Vec2{0.6, 0.6}, Vec2{0.9, 0.6}, Vec2{0.6, 0.9}, Vec2{0.88, 0.93}}) {
            IslandSolution sol = island_solve(s, kW, t);
            Vec2 r = R_map(s, sol.lambda, kW);
            CHECK(std::max(std::abs(r[0] - t[0]), std::abs(r[1] - t[1])) < 1e-8);
            auto J = fd_jacobian2([&](const Vec2& l) { return R_map(s, l, kW); }, sol.lambda, 1e-7);
            CHECK(J[0][0] * J[1][1] - J[0][1] * J[1][0] > 0.0);
        }
    }
    SUBCASE("idempotent refinement") {
        IslandSolution again = solve_depth(s, {kW}, {0.75, 0.75}, c.lambda, SolveOptions{});
        CHECK(std::abs(again.lambda[0] - c.lambda[0]) < 1e-10);
        CHECK(std::abs(again.lambda[1] - c.lambda[1]) < 1e-10);
    }
    SUBCASE("boundary target lands on the trivial-left curve") {
        IslandSolution e = island_solve(s, kW, {0.5, 0.75});
        CHECK(std::abs(e.lambda[0] - triv_left_curve(s, 1, e.lambda[1])) < 1e-7);
        Vec2 r = R_map(s, {triv_left_curve(s, 1, c.lambda[1]), c.lambda[1]}, kW);
        CHECK(std::abs(r[0] - 0.5) < 1e-7);
    }
    SUBCASE("raising u raises lcv(Rf)") {
        for (double h : {1e-6, 1e-5}) {
            double l0 = renormalize(s.at(c.lambda), 1, 2).lcv();
            double l1 = renormalize(s.at(c.lambda[0] + h, c.lambda[1]), 1, 2).lcv();
            CHECK(l1 > l0);
        }
    }
    SUBCASE("decomposed slice") {
        Slice b = bumpy_slice();
        IslandSolution sol = island_solve(b, kW, {0.7, 0.8});
        CHECK(sol.residual < 1e-8);
    }
    CHECK_THROWS_AS(island_solve(s, kW, {0.3, 0.75}), Error);
    CHECK_THROWS_AS(R_map(s, {0.3, 0.3}, kW), Error);
}

TEST_CASE("cascade (01,100)^4") {
    Slice s = Slice::identity(2.0, 0.5);
    std::vector<MonotoneType> types(4, kW);
    CascadeResult r = cascade(s, types);
    REQUIRE(r.boxes.size() == 4);
    for (std::size_t k = 0; k + 1 < r.boxes.size(); ++k) {
        CHECK(r.boxes[k].contains(r.boxes[k + 1]));
        CHECK(r.boxes[k].depth == static_cast<int>(k) + 1);
    }
    REQUIRE(r.diameter_ratios.size() == 3);
    for (double q : r.diameter_ratios) CHECK(q < 1.0);
    LorenzMap f = r.map_at(s);
    for (std::size_t k = 0; k < 4; ++k) {
        LorenzMap g = renormalize_n(f, types, k);
        CHECK(try_detect(g, 1, 2).has_value());
    }
    CascadeResult one = cascade(s, {kW}, false);
    IslandSolution direct = island_solve(s, kW, {0.75, 0.75});
    CHECK(std::abs(one.lambda[0] - direct.lambda[0]) < 1e-9);
    CHECK(std::abs(one.lambda[1] - direct.lambda[1]) < 1e-9);
}

TEST_CASE("fixed-point approximation") {
    Slice s = Slice::identity(2.0, 0.5);
    double prev = 1e300;
    for (int d : {4, 6, 8}) {
        FixedPointApprox fp = d == 4 ? depth4() : fixed_point_approx(kW, s, d);
        MESSAGE("depth " << d << " residual " << fp.residual);
        CHECK(fp.residual < prev);
        prev = fp.residual;
        CHECK(try_detect(fp.map, 1, 2).has_value());
        CHECK(std::abs(fp.image.c() - fp.map.c()) <= fp.residual);
        CHECK(fp.residual == std::max({fp.du, fp.dv, fp.dc, fp.dmap}));
    }
}

TEST_CASE("derivative diagnostics") {
    Slice s = Slice::identity(2.0, 0.5);
    std::vector<LorenzMap> maps{s.at(island_solve(s, kW, {0.75, 0.75}).lambda),
                                s.at(island_solve(s, kW, {0.65, 0.85}).lambda),
                                bumpy_slice().at(island_solve(bumpy_slice(), kW, {0.75, 0.75}).lambda)};
    for (const LorenzMap& f : maps) {
        FDJacobian J = jacobian_fd(f, kW, {});
        CHECK(J.det_M1 > 0.0);
        CHECK(J.du_dc < 0.0);
        CHECK(J.dv_dc > 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double scale = std::max(1.0, std::abs(J.M1[i][j]));
                CHECK(std::abs(J.M1_forward[i][j] - J.M1[i][j]) < 1e-3 * scale);
                CHECK(std::abs(J.M1_backward[i][j] - J.M1[i][j]) < 1e-3 * scale);
            }
    }
    const LorenzMap& deep = maps[2];
    FDJacobian Jd = jacobian_fd(deep, kW, {0, 1, 2});
    CHECK(Jd.x_columns.size() == 3);
    CHECK(Jd.y_columns.size() == 3);
}

TEST_CASE("cone field at the depth-4 map") {
    const LorenzMap& f = depth4().map;
    REQUIRE(f.phi_decomposition().size() + f.psi_decomposition().size() >= 4);
    ConeReport r = cone_check(f, kW, 1.0, 32);
    CHECK(r.into_cone());
    CHECK(r.expanding());
    CHECK(std::isfinite(r.x_axis_output_ratio));
    CHECK(r.x_axis_expansion > 1.0);
    CHECK(r.zero_maps_to_zero);
}
