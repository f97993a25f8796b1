#pragma once

#include <optional>
#include <vector>

#include "hammerfix/solver.hpp"

namespace hammerfix::oracle {

// Function values on the uniform grid t_j = j/(n-1).
struct GridFunction {
    int n = 0;
    std::vector<double> values;

    static GridFunction constant(int n, double value);
    double sup_distance(const GridFunction& other) const;
};

struct Rectangle {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
};

struct OracleReport {
    std::vector<solver::PlanePoint> q_fixed_points;
    int newton_starts = 0;
    int newton_converged = 0;
    std::vector<GridFunction> picard_limits;
    int picard_seeds = 0;
    int picard_converged = 0;
    bool match = false;  // q fixed-point count equals solver n_fix
};

// The 2D map Q_k(x,y) = (sum a_i x^{k-i} y^i, sum b_i x^{k-i} y^i).
solver::PlanePoint q_map(const solver::PlanePoint& p, const quad::CoefficientSet& c);

// Damped Newton on Q_k(p) - p from a grid of starts over the region, plus
// seeds derived from the polynomial roots (guards against tangential fixed
// points an open scan could miss). Converged interior points deduplicated
// at radius 1e-7, sorted by x.
std::vector<solver::PlanePoint> newton_scan_q(const quad::CoefficientSet& c,
                                              const Rectangle& region,
                                              int starts_per_axis);

// (H_k f)(t_j) by composite Simpson quadrature over the grid values.
GridFunction apply_operator_grid(const GridFunction& f, const quad::KernelSpec& kernel);

// Iterates f <- H_k f; empty on divergence or non-convergence.
std::optional<GridFunction> picard(const quad::KernelSpec& kernel, const GridFunction& seed,
                                   int max_iter, double tol);

// Full cross-check against a solver report.
OracleReport run(const quad::KernelSpec& kernel, const solver::SolveReport& report,
                 int starts_per_axis = 12, int picard_seeds = 1);

}  // namespace hammerfix::oracle
