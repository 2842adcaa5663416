#pragma once

#include <array>
#include <optional>
#include <vector>

#include "renormlab/renorm.hpp"

namespace renormlab {

using Vec2 = std::array<double, 2>;

struct MonotoneType {
    int a = 1, b = 1;
    bool operator==(const MonotoneType&) const = default;
};

/// Frozen coordinates (c, phi, psi) of the family lambda = (u, v) -> F_lambda.
struct Slice {
    double alpha = 2.0;
    double c = 0.5;
    Decomposition phi{2.0};
    Decomposition psi{2.0};

    static Slice identity(double alpha, double c);
    static Slice of(const LorenzMap& f);
    LorenzMap at(double u, double v) const { return LorenzMap(alpha, u, v, c, phi, psi); }
    LorenzMap at(const Vec2& l) const { return at(l[0], l[1]); }
};

/// u = phi^{-1} o (psi o Q1)^{-a}(c): F^{a+1}(c-) = c along the curve.
double triv_left_curve(const Slice& s, int a, double v);
/// v = 1 - psi^{-1} o (phi o Q0)^{-b}(c): F^{b+1}(c+) = c along the curve.
double triv_right_curve(const Slice& s, int b, double u);
/// Intersection of the two curves: the trivial corner of the island.
Vec2 triv_crossing(const Slice& s, MonotoneType w);

/// pi_S(lcv, 1 - rcv, c) = (1 - (1-lcv)/(2(1-c)), 1 - rcv/(2c)).
Vec2 project_S(const LorenzBase& g);

/// pi_S o H o R(F_lambda); detection accepts the closure of the island. Throws OffArchipelago.
Vec2 R_map(const Slice& s, const Vec2& lambda, MonotoneType w);

/// pi_S o H o R^k(F_lambda) for the first k types of the list.
Vec2 R_map_depth(const Slice& s, const Vec2& lambda, const std::vector<MonotoneType>& types);

struct SolveOptions {
    double tol = 1e-12;   // residual target (max norm in S)
    double scale = 1e-2;  // expected size of the island; FD steps are 1e-3 of it
    int max_iter = 80;
};

struct IslandSolution {
    Vec2 lambda{};
    Vec2 value{};
    double residual = 0.0;
    int iterations = 0;
};

/// Damped Newton on R_map with FD Jacobian, started from the trivial corner.
IslandSolution island_solve(const Slice& s, MonotoneType w, const Vec2& target, SolveOptions opt = {});

/// Newton for R_map_depth(lambda) = target starting from lambda0.
IslandSolution solve_depth(const Slice& s, const std::vector<MonotoneType>& types, const Vec2& target,
                           const Vec2& lambda0, SolveOptions opt);

/// FD Jacobian of a map R^2 -> R^2 at lambda (central where defined).
std::array<Vec2, 2> fd_jacobian2(const std::function<Vec2(const Vec2&)>& F, const Vec2& lambda, double h);

struct IslandBox {
    MonotoneType type;
    int depth = 0;
    Vec2 lambda{};
    double u_lo = 0, u_hi = 0, v_lo = 0, v_hi = 0;
    double diameter() const { return std::max(u_hi - u_lo, v_hi - v_lo); }
    bool contains(const IslandBox& o) const {
        return u_lo < o.u_lo && o.u_hi < u_hi && v_lo < o.v_lo && o.v_hi < v_hi;
    }
};

struct CascadeResult {
    Vec2 lambda{};
    std::vector<IslandBox> boxes;  // depth 1..k
    std::vector<double> diameter_ratios;
    LorenzMap map_at(const Slice& s) const { return s.at(lambda); }
};

/// Nested islands for the type list; with_boxes = false skips boundary solves (boxes are then
/// rough squares of the predicted diameter and carry no measurement).
CascadeResult cascade(const Slice& s, const std::vector<MonotoneType>& types, bool with_boxes = true);

/// R^k F with detection of each listed type in order.
LorenzMap renormalize_n(const LorenzMap& f, const std::vector<MonotoneType>& types, std::size_t k);

struct FixedPointApprox {
    LorenzMap map;
    LorenzMap image;
    double residual = 0.0;
    double du = 0, dv = 0, dc = 0, dmap = 0;
};
FixedPointApprox fixed_point_approx(MonotoneType w, const Slice& s, int depth);
/// max(|u-u'|, |v-v'|, |c-c'|, sup |f - g|) on a 256-grid away from both critical points.
FixedPointApprox fixed_point_residual(const LorenzMap& f, MonotoneType w);

struct FDJacobian {
    double h = 1e-6;
    MonotoneType type;
    std::array<Vec2, 2> M1{};  // M1[i][j] = d x'_i / d x_j, x = (u, v)
    std::array<Vec2, 2> M1_forward{}, M1_backward{};
    double det_M1 = 0.0;
    double du_dc = 0.0, dv_dc = 0.0, dc_dc = 0.0;
    /// Sampled directions: index into phi pieces then psi pieces; columns of y' = (c', s'_phi, s'_psi).
    std::vector<std::size_t> directions;
    std::vector<Vec2> x_columns;                // d(u',v')/d s_k
    std::vector<std::vector<double>> y_columns;  // d(c', s')/d s_k
};

FDJacobian jacobian_fd(const LorenzMap& f, MonotoneType w, const std::vector<std::size_t>& directions,
                       double h = 1e-6);

struct ConeReport {
    double kappa = 1.0;
    int samples = 0;
    double max_output_ratio = 0.0;  // max ||y'|| / ||x'||
    double min_expansion = 0.0;     // min ||z'|| / ||z||
    double x_axis_output_ratio = 0.0;
    double x_axis_expansion = 0.0;
    bool zero_maps_to_zero = true;
    bool into_cone() const { return max_output_ratio < kappa; }
    bool expanding() const { return min_expansion > 1.0; }
};

/// Directional FD derivative of R on tangent vectors of the cone ||y|| <= kappa ||x||.
ConeReport cone_check(const LorenzMap& f, MonotoneType w, double kappa, int samples = 64, double h = 1e-6);

}  // namespace renormlab
