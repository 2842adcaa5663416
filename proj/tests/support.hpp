#pragma once

// Independent numerical oracles shared by the test binaries. Nothing here calls the library's
// evaluation code; formulas are re-derived in long double.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using ld = long double;

/// ((1 + r x)^alpha - 1) / ((1 + r)^alpha - 1), r = e^{s/(alpha-1)} - 1, straight from the definition.
inline ld pure(ld alpha, ld s, ld x) {
    if (s == 0) return x;
    ld r = std::expm1(s / (alpha - 1));
    return (std::pow(1 + r * x, alpha) - 1) / (std::pow(1 + r, alpha) - 1);
}

inline ld pure_deriv(ld alpha, ld s, ld x) {
    if (s == 0) return 1;
    ld r = std::expm1(s / (alpha - 1));
    return alpha * r * std::pow(1 + r * x, alpha - 1) / (std::pow(1 + r, alpha) - 1);
}

/// Bisection inverse of the oracle pure map.
inline ld pure_inverse(ld alpha, ld s, ld y) {
    ld lo = 0, hi = 1;
    for (int k = 0; k < 200; ++k) {
        ld m = (lo + hi) / 2;
        (pure(alpha, s, m) < y ? lo : hi) = m;
    }
    return (lo + hi) / 2;
}

inline ld compose(ld alpha, const std::vector<double>& s, ld x) {
    for (double sk : s) x = pure(alpha, sk, x);
    return x;
}

inline ld compose_deriv(ld alpha, const std::vector<double>& s, ld x) {
    ld d = 1;
    for (double sk : s) {
        d *= pure_deriv(alpha, sk, x);
        x = pure(alpha, sk, x);
    }
    return d;
}

/// Standard family composed with pure decompositions.
struct Lorenz {
    ld alpha, u, v, c;
    std::vector<double> phi, psi;
    ld operator()(ld x) const {
        if (x < c) return compose(alpha, phi, u * (1 - std::pow((c - x) / c, alpha)));
        return compose(alpha, psi, 1 + v * (std::pow((x - c) / (1 - c), alpha) - 1));
    }
    ld left_limit() const { return compose(alpha, phi, u); }
    ld right_limit() const { return compose(alpha, psi, 1 - v); }
};

/// Richardson-extrapolated central differences (error O(h^4)).
inline double d1(const std::function<double(double)>& f, double x, double h) {
    auto c = [&](double t) { return (f(x + t) - f(x - t)) / (2 * t); };
    return (4 * c(h / 2) - c(h)) / 3;
}

inline double d2(const std::function<double(double)>& f, double x, double h) {
    auto c = [&](double t) { return (f(x + t) - 2 * f(x) + f(x - t)) / (t * t); };
    return (4 * c(h / 2) - c(h)) / 3;
}

/// Composite Simpson on [a,b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(g);
}

}  // namespace oracle
