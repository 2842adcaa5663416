#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "renormlab/lorenz.hpp"

namespace renormlab {

struct ReturnStructure {
    int a = 0, b = 0;
    double p = 0.0, q = 0.0;
    Interval C, L, R, U, V;
    std::vector<Interval> cycles_u;  // U_1 .. U_{a+1}, U_{a+1} = C
    std::vector<Interval> cycles_v;  // V_1 .. V_{b+1}, V_{b+1} = C
    Interval branch_left;            // (l, c): domain of f1^a o f0 adjacent to c
    Interval branch_right;           // (c, r)
    double return_left = 0.0;        // f^{a+1}(c-)
    double return_right = 0.0;       // f^{b+1}(c+)
    double multiplier_p = 0.0;       // D(f1^a o f0)(p)
    double multiplier_q = 0.0;       // D(f0^b o f1)(q)
    double period_error = 0.0;       // max |f^{a+1}(p) - p|, |f^{b+1}(q) - q|
};

struct DetectOptions {
    /// Accept the closure of the renormalizable set: trivial or full branches of Rf.
    bool closed = false;
};

/// Monotone type (0 1^a, 1 0^b) return structure; throws Error describing why f is not renormalizable.
ReturnStructure detect(const LorenzBase& f, int a, int b, DetectOptions opt = {});
std::optional<ReturnStructure> try_detect(const LorenzBase& f, int a, int b, DetectOptions opt = {});

/// Tuple renormalization with decomposed diffeomorphic parts.
LorenzMap renormalize(const LorenzMap& f, const ReturnStructure& rs, bool prune = true);
LorenzMap renormalize(const LorenzMap& f, int a, int b);

/// Renormalization of a plain map: phi' = Z(f1^a o phi; U), psi' = Z(f0^b o psi; V).
GeneralLorenzMap renormalize_plain(const GeneralLorenzMap& f, const ReturnStructure& rs);

/// h^{-1} o f^{a+1 or b+1} o h by direct iteration.
double first_return_oracle(const LorenzBase& f, const ReturnStructure& rs, double x);

/// f1^a o f0 and f0^b o f1 on their branch closures.
double left_return(const LorenzBase& f, int a, double x, double* deriv = nullptr);
double right_return(const LorenzBase& f, int b, double x, double* deriv = nullptr);

std::vector<std::pair<int, int>> detect_search(const LorenzBase& f, int a_max, int b_max);

struct Check {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string claim;
};

struct Report {
    std::vector<Check> checks;
    bool all_pass() const;
    const Check& at(const std::string& name) const;
};

/// Window checks for the invariant set: eps = 1 - c and distortion bounds with delta = 1/b_lower^2.
Report verify_K_membership(const LorenzMap& f, int b_lower, double sigma, double beta, double theta);

/// Measured surrogates for the critical-value, derivative and distortion estimates (diagnostic).
Report verify_lemma_bounds(const LorenzMap& f, const ReturnStructure& rs);

}  // namespace renormlab
