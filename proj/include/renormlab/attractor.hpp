#pragma once

#include <array>
#include <string>
#include <vector>

#include "renormlab/param.hpp"

namespace renormlab {

enum class NodeKind : std::uint8_t { U, V, C, Unit };

struct CoverInterval {
    Interval I;
    NodeKind kind = NodeKind::C;
    int index = 0;   // i for U_n^i / V_n^j
    int parent = -1; // index into the previous level's interval list
};

struct CoverLevel {
    int n = 0;
    std::vector<CoverInterval> intervals;  // sorted by left endpoint
    std::vector<Interval> gaps;            // complement components inside parents
    std::vector<double> interval_ratios;   // |I| / |parent|
    std::vector<double> gap_ratios;        // |gap| / |parent|
    double total_length = 0.0;
    std::size_t count() const { return intervals.size(); }
    double mean_length() const { return total_length / static_cast<double>(intervals.size()); }
};

/// Renormalization data of f tracked to depth: types, charts of C_n, transfer words.
struct Covers {
    std::vector<MonotoneType> types;  // type of R^n f, n = 0..depth-1
    std::vector<CoverLevel> levels;   // n = 0..depth
    std::vector<Interval> C;          // C_n, n = 0..depth (C_0 = [0,1])
    std::vector<std::string> word0;   // f-word of L_n (length A_n + 1), n >= 1; entry 0 unused
    std::vector<std::string> word1;   // f-word of R_n
};

/// Depth-level covers. Types are detected level by level (smallest return time first) when not given.
Covers build_covers(const LorenzMap& f, int depth, const std::vector<MonotoneType>& types = {});

/// Words of L_n and R_n from the substitution W0' = W0 W1^a, W1' = W1 W0^b.
std::pair<std::string, std::string> level_words(const std::vector<MonotoneType>& types, int n);

struct DimensionEstimate {
    double dimension = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of the fit
    double stderr_ = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // +- 2 standard errors
};

/// Least-squares slope of log(count) against -log(mean length).
DimensionEstimate box_dimension_estimate(const std::vector<CoverLevel>& levels);
/// Synthetic two-children cover with ratio 1/3 (middle thirds), levels 0..n.
std::vector<CoverLevel> middle_thirds_cover(int levels);

struct TransferResult {
    double T = 0.0;
    long tau = 0;
};

/// Boundary orbits stay out of C: each endpoint is iterated until it returns (periodic) or for cap steps.
bool is_nice(const LorenzBase& f, const Interval& C, long cap = 100000);
/// First landing in the open interval C; C must be nice.
TransferResult transfer(const LorenzBase& f, const Interval& C, double x, long cap = 1000000);

struct TransferBranch {
    long tau = 0;
    std::string word;              // sides of x, f(x), ..., f^{tau-1}(x)
    std::vector<Interval> images;  // I, f(I), ..., f^tau(I) = C
};
/// Branch of the transfer map containing x, by pulling C back along the orbit word.
TransferBranch transfer_branch(const LorenzBase& f, const Interval& C, double x, long cap = 1000000);

struct WeakMarkovReport {
    std::vector<std::array<double, 2>> ratios;  // per level n: left and right gap of C_n \ C_{n+1} over |C_{n+1}|
    double delta = 0.0;                         // min over all
    bool nested = true;
    double last_change = 0.0;  // relative change of the per-level minimum between the last two levels
};
WeakMarkovReport weak_markov_check(const Covers& cv);
WeakMarkovReport weak_markov_check(const LorenzMap& f, int depth);

struct LoopGraph {
    int n = 0;
    std::vector<CoverInterval> nodes;
    std::vector<std::vector<int>> edges;  // out-neighbours
    int zero = -1, one1 = -1, one2 = -1;
    std::vector<int> loop1, loop2;  // node indices from one^i to zero
};

LoopGraph build_loop_graph(const LorenzMap& f, const Covers& cv, int level);

using WindingMatrix = std::array<std::array<long, 2>, 2>;
/// w_ij = number of level-(n+1) loop-j nodes inside one_n^i.
WindingMatrix winding_matrix(const LorenzMap& f, const Covers& cv, int n);
WindingMatrix winding_closed_form(MonotoneType next);

struct ConeWidth {
    int matrices = 0;
    double angular_width = 0.0;
    std::array<double, 2> ray_lo{}, ray_hi{};  // normalized extreme rays (x1 + x2 = 1)
};

struct MeasureResult {
    std::vector<WindingMatrix> W;            // W_1 .. W_{D-1}
    std::vector<ConeWidth> widths;           // after 1 .. D-1 matrices
    bool unique = false;                     // width below 1e-10
    std::vector<std::array<double, 2>> z;    // loop masses per level 1..D (z[0] is level 1)
    std::array<double, 2> extreme_lo{}, extreme_hi{};  // normalized extremal measures at level 1
    std::vector<std::vector<double>> weights;  // per level, per cover interval (sorted order)
    double push_forward_error = 0.0;           // max |z_n - W_n z_{n+1}|
    double total_mass_error = 0.0;
};

/// Loop-measure masses normalized so that A_1 x1 + B_1 x2 + (x1 + x2) = 1.
MeasureResult invariant_measure_from_winding(const std::vector<WindingMatrix>& W, long A1, long B1);
MeasureResult invariant_measure(const LorenzMap& f, int depth, const std::vector<MonotoneType>& types = {});

/// max |mu(f^{-1} I) - mu(I)| over level-n nodes other than the loop heads.
double measure_invariance_error(const LorenzMap& f, const Covers& cv, const MeasureResult& m, int level);

/// log(1 + |zz'||ww'| / (|wz||z'w'|)) with w, w' where the line through z, z' meets the boundary rays.
double hilbert_distance(const std::array<double, 2>& z, const std::array<double, 2>& zp);
/// (sqrt(ab) - 1) / (sqrt(ab) + 1) for W = [[1,b],[a,1]].
double hilbert_contraction_bound(long a, long b);
/// tanh(Delta/4) with Delta = |log(w11 w22 / (w12 w21))|; 1 when an entry vanishes.
double birkhoff_contraction(const WindingMatrix& W);
/// sup of d(Wz, Wz') / d(z, z') over sampled close pairs (fixed seed).
double measured_contraction(const WindingMatrix& W, int pairs, unsigned long long seed = 20240611ULL);

}  // namespace renormlab
