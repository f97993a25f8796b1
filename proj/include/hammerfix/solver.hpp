#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hammerfix/poly.hpp"
#include "hammerfix/quad.hpp"

namespace hammerfix::solver {

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& msg)
        : std::runtime_error(stage + ": " + msg), stage_name(stage) {}
    std::string stage_name;
};

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

// Reconstructed fixed point f0(t) = x0 phi1(t) + y0 phi2(t).
struct FixedPointFn {
    double x0 = 0.0;
    double y0 = 0.0;
    double xi = 0.0;  // generating polynomial root y0/x0
    std::vector<std::pair<double, double>> samples;  // (t, f0(t))
    double residual_sup = -1.0;  // set by verify_operator
};

enum class Classification {
    UniqueBySignPattern,
    AtMost3ByMonotoneDecrease,
    BracketImpliesGe2,
    General,
};

std::string to_string(Classification c);

struct ClassificationFacts {
    Classification verdict = Classification::General;
    bool sign_pattern = false;       // d <= 0 up to i0, then >= 0
    bool d_nondecreasing = false;
    bool d_nonincreasing = false;
    bool bracket_found = false;      // P(xi1) > 0 and P(xi2) <= 0 with xi1 < xi2
};

struct OracleSummary {
    int oracle_count = 0;
    bool match = false;
    double max_ratio_mismatch = 0.0;  // worst |y/x - nearest root|
};

struct SolveReport {
    std::vector<std::string> kernel_sources;  // phi1, phi2, psi1, psi2 canonical text
    int k = 0;
    quad::CoefficientSet coefficients;
    poly::PolySpec polynomial;
    int descartes_bound = 0;
    std::vector<poly::PositiveRoot> roots;
    std::vector<FixedPointFn> fixed_points;
    ClassificationFacts classification;
    int n_fix = 0;
    std::optional<OracleSummary> oracle;
};

struct SolveOptions {
    double quad_tol = 1e-10;
    double root_tol = 1e-10;
    double residual_tol = 1e-6;
    int report_grid = 201;
    int cone_grid = 1001;
};

// x0 = (sum a_i xi0^i)^{-1/(k-1)}, y0 = xi0 x0.
PlanePoint root_to_point(double xi0, const quad::CoefficientSet& c);

// max(|Q1(p) - x|, |Q2(p) - y|) for the 2D map Q_k.
double verify_q(const PlanePoint& p, const quad::CoefficientSet& c);

FixedPointFn reconstruct(const PlanePoint& p, const quad::KernelSpec& kernel, int grid);

// Applies the integral operator to the reconstructed closed form and
// returns the sup-norm residual over the sample grid; stores it in f.
double verify_operator(FixedPointFn& f, const quad::KernelSpec& kernel, double tol);

ClassificationFacts classify(const quad::CoefficientSet& c);

SolveReport solve(const quad::KernelSpec& kernel, const SolveOptions& opts = {});

}  // namespace hammerfix::solver
