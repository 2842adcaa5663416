#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "renormlab/error.hpp"
#include "renormlab/lorenz.hpp"
#include "support.hpp"

using namespace renormlab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Domain;
}

LorenzMap sample_map() {
    return LorenzMap(2.0, 0.9, 0.85, 0.47, Decomposition::from_s(2.0, {0.6, -1.2, 0.3}),
                     Decomposition::from_s(2.0, {-0.4, 0.9}));
}

oracle::Lorenz sample_oracle() { return {2.0L, 0.9L, 0.85L, 0.47L, {0.6, -1.2, 0.3}, {-0.4, 0.9}}; }

}  // namespace

TEST_CASE("standard family") {
    CHECK(std::abs(q_eval(0, 1.0, 1.0, 0.5, 2.0, 0.25) - 0.75) < 1e-16);
    CHECK(std::abs(q_eval(0, 0.7, 1.0, 0.5, 2.0, std::nextafter(0.5, 0.0)) - 0.7) < 1e-15);
    CHECK(q_eval(1, 0.7, 0.6, 0.4, 3.0, 1.0) == 1.0);
    CHECK(q_eval(0, 0.7, 0.6, 0.4, 3.0, 0.0) == 0.0);
    CHECK(code_of([] { q_eval(0, 1, 1, 0.5, 2, 0.5); }) == ErrorCode::CriticalPoint);
    CHECK(code_of([] { q_eval(1, 1, 1, 0.5, 2, 0.5); }) == ErrorCode::CriticalPoint);
    auto g = oracle::rng(31);
    for (int k = 0; k < 200; ++k) {
        double u = oracle::uniform(g, 0.1, 1), v = oracle::uniform(g, 0.1, 1), c = oracle::uniform(g, 0.1, 0.9);
        double alpha = oracle::uniform(g, 1.2, 4);
        double x0 = oracle::uniform(g, 0, c), x1 = oracle::uniform(g, c, 1);
        if (x1 == c || x0 >= c) continue;
        double q0 = q_eval(0, u, v, c, alpha, x0), q1 = q_eval(1, u, v, c, alpha, x1);
        REQUIRE(q0 >= 0.0);
        REQUIRE(q0 < u);
        REQUIRE(q1 > 1 - v);
        REQUIRE(q1 <= 1.0);
        // backward error in x is amplified by 1/DQ, which blows up at c
        double k0 = 1.0 / q_deriv(0, u, v, c, alpha, x0), k1 = 1.0 / q_deriv(1, u, v, c, alpha, x1);
        REQUIRE(std::abs(q_inverse(0, u, v, c, alpha, q0) - x0) < 1e-12 + 4e-16 * k0);
        REQUIRE(std::abs(q_inverse(1, u, v, c, alpha, q1) - x1) < 1e-12 + 4e-16 * k1);
        // the inverse lives on the closed branch, so it may round onto c itself
        if (double xi = q_inverse(0, u, v, c, alpha, q0); xi < c)
            REQUIRE(std::abs(q_eval(0, u, v, c, alpha, xi) - q0) < 1e-15);
        double xm = c * (0.1 + 0.8 * x0 / c);
        double fd = oracle::d1([&](double t) { return q_eval(0, u, v, c, alpha, t); }, xm, 1e-4);
        REQUIRE(std::abs(q_deriv(0, u, v, c, alpha, xm) - fd) < 1e-8 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("evaluation") {
    LorenzMap id(2.0, 1.0, 1.0, 0.5);
    for (double x : {0.1, 0.3, 0.7, 0.95}) CHECK(std::abs(f_eval(id, x) - q_eval(x < 0.5 ? 0 : 1, 1, 1, 0.5, 2, x)) < 1e-15);
    LorenzMap f = sample_map();
    oracle::Lorenz o = sample_oracle();
    CHECK(f_eval(f, 0.0) == 0.0);
    CHECK(std::abs(f_eval(f, 1.0) - 1.0) < 1e-15);
    CHECK(code_of([&] { f_eval(f, 0.47); }) == ErrorCode::CriticalPoint);
    CHECK(std::abs(f.lcv() - static_cast<double>(o.left_limit())) < 1e-13);
    CHECK(std::abs(f.rcv() - static_cast<double>(o.right_limit())) < 1e-13);

    auto g = oracle::rng(32);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        double x = oracle::uniform(g, 0, 1);
        if (std::abs(x - f.c()) < 1e-3) continue;
        REQUIRE(std::abs(f_eval(f, x) - static_cast<double>(o(x))) < 1e-13);
        double fd = (f_eval(f, x + 1e-7) - f_eval(f, x - 1e-7)) / 2e-7;
        double d = f_deriv(f, x);
        REQUIRE(std::abs(d - fd) < 1e-6 * std::max(1.0, std::abs(d)));
        ++checked;
    }
    CHECK(checked > 90);
}

TEST_CASE("inverse branches") {
    LorenzMap id(2.0, 1.0, 1.0, 0.5);
    CHECK(std::abs(inverse_branch(id, 0, 0.75) - 0.25) < 1e-15);
    LorenzMap f = sample_map();
    // square-root conditioning at the critical value: 1e-16 in y is ~1e-8 in x
    CHECK(std::abs(inverse_branch(f, 0, f.lcv()) - f.c()) < 1e-7);
    CHECK(std::abs(inverse_branch(f, 1, f.rcv()) - f.c()) < 1e-7);
    CHECK(code_of([&] { inverse_branch(f, 0, f.lcv() + 1e-3); }) == ErrorCode::NoPreimage);
    CHECK(code_of([&] { inverse_branch(f, 1, f.rcv() - 1e-3); }) == ErrorCode::NoPreimage);
    auto g = oracle::rng(33);
    for (int k = 0; k < 100; ++k) {
        double y0 = oracle::uniform(g, 0, f.lcv());
        REQUIRE(std::abs(f_eval(f, inverse_branch(f, 0, y0)) - y0) < 1e-12);
        double y1 = oracle::uniform(g, f.rcv(), 1);
        double x1 = inverse_branch(f, 1, y1);
        if (x1 > f.c()) REQUIRE(std::abs(f_eval(f, x1) - y1) < 1e-12);
        double x = oracle::uniform(g, 0, f.c());
        REQUIRE(std::abs(inverse_branch(f, 0, f_eval(f, x)) - x) < 1e-10);
    }
}

TEST_CASE("orbits") {
    LorenzMap f = sample_map();
    Orbit z = orbit(f, 0.0, 12);
    CHECK(z.word == std::string(12, '0'));
    for (double p : z.points) CHECK(p == 0.0);
    Orbit one = orbit(f, 1.0, 12);
    CHECK(one.word == std::string(12, '1'));
    CHECK(one.points.size() == 13);

    Orbit o = orbit(f, 0.3, 20);
    oracle::Lorenz ref = sample_oracle();
    oracle::ld x = 0.3L;
    for (int k = 0; k < 6; ++k) {
        CHECK(o.word[k] == (x < ref.c ? '0' : '1'));
        x = ref(x);
        CHECK(std::abs(o.points[k + 1] - static_cast<double>(x)) < 1e-10);
    }
    CHECK(code_of([&] { orbit(f, f.c(), 3); }) == ErrorCode::HitCriticalPoint);
    double pre = inverse_branch(f, 0, f.c());
    CHECK(code_of([&] { orbit(f, pre, 3); }) == ErrorCode::HitCriticalPoint);
}

TEST_CASE("nontriviality") {
    CHECK(nontrivial(LorenzMap(2.0, 1.0, 1.0, 0.5)));
    CHECK_FALSE(nontrivial(LorenzMap(2.0, 0.4, 1.0, 0.5)));
    CHECK_FALSE(nontrivial(LorenzMap(2.0, 1.0, 0.4, 0.5)));
    CHECK_FALSE(nontrivial(LorenzMap(2.0, 0.5, 1.0, 0.5)));
    Decomposition phi = Decomposition::from_s(2.0, {1.1});
    double u = phi.apply_inverse(0.5);
    CHECK_FALSE(nontrivial(LorenzMap(2.0, u, 1.0, 0.5, phi, Decomposition(2.0))));
    CHECK(nontrivial(LorenzMap(2.0, u + 1e-6, 1.0, 0.5, phi, Decomposition(2.0))));
}

TEST_CASE("monotone family") {
    LorenzMap f = sample_map();
    for (int i = 1; i < 40; ++i) {
        double x0 = f.c() * i / 40.0, x1 = f.c() + (1 - f.c()) * i / 40.0;
        REQUIRE(f_eval(f.with_params(0.91, 0.85), x0) > f_eval(f, x0));
        REQUIRE(f_eval(f.with_params(0.9, 0.86), x1) < f_eval(f, x1));
    }
}

TEST_CASE("composed view") {
    LorenzMap f = sample_map();
    GeneralLorenzMap g = compose_map(f);
    for (double x : {0.05, 0.4, 0.6, 0.99}) {
        CHECK(std::abs(f_eval(g, x) - f_eval(f, x)) < 1e-15);
        CHECK(std::abs(f_deriv(g, x) - f_deriv(f, x)) < 1e-12 * f_deriv(f, x));
    }
}
