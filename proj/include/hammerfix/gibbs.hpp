#pragma once

#include <optional>

#include "hammerfix/solver.hpp"

namespace hammerfix::gibbs {

// Fails loudly when a run contradicts a proved uniqueness statement; such a
// failure means a bug, not a result.
struct ContradictionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nearest-neighbor model on the Cayley tree of order k with spin values in
// [0,1] and kernel a + b t u; beta is recorded for reporting only (the
// reduced kernel absorbs it).
struct GibbsModel {
    double a = 1.0;
    double b = 1.0;
    int k = 2;
    double beta = 1.0;
};

struct GibbsReport {
    GibbsModel model;
    quad::CoefficientSet coefficients;
    std::vector<double> d;
    bool d_monotone_nondecreasing = false;
    double h_derivative_min = 0.0;
    std::optional<int> n_tigm;  // unset for k = 1 (solver path needs k >= 2)
    std::optional<solver::SolveReport> solve_report;
};

// Closed forms: a[i] = a C(k,i)/(i+1), b[i] = b C(k,i)/(i+2).
quad::CoefficientSet gibbs_coefficients(const GibbsModel& m);

// d[i] = C(k,i) (a/(k-i+1) - b/(i+2)), i = 1..k.
std::vector<double> gibbs_d(const GibbsModel& m);

// Samples h'(x) = a/(k-x+1)^2 + b/(x+2)^2 on [1,k]; returns its minimum and
// whether h at the integers 1..k is nondecreasing.
std::pair<double, bool> h_function_check(const GibbsModel& m, int samples);

// Builds the induced kernel (phi1=1, psi1=a, phi2=t, psi2=b t), runs the
// solver, and asserts n_fix = 1; a different count throws ContradictionError.
GibbsReport analyze(const GibbsModel& m, const solver::SolveOptions& opts = {});

// The induced degenerate kernel spec for a model (k >= 2).
quad::KernelSpec induced_kernel(const GibbsModel& m);

}  // namespace hammerfix::gibbs
