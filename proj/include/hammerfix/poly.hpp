#pragma once

#include <stdexcept>
#include <vector>

#include "hammerfix/quad.hpp"

namespace hammerfix::poly {

struct SignUndecidable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Real polynomial, coefficients ordered by descending degree.
// For specs built from a CoefficientSet, degree = k+1 and zero_tol is the
// band below which a coefficient counts as zero for sign-based rules.
struct PolySpec {
    std::vector<double> coeffs;
    int k = 0;
    double zero_tol = 0.0;

    PolySpec() = default;
    explicit PolySpec(std::vector<double> c, double ztol = 0.0);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double eval(double x) const;
    double eval_derivative(double x) const;
    double scale() const;  // max |coeff|
};

struct PositiveRoot {
    double value = 0.0;
    double lo = 0.0, hi = 0.0;       // enclosure, Sturm count 1
    double poly_residual = 0.0;      // |P(value)|
    bool sign_confirmed = false;     // sign change across enclosure or Sturm-certified
    int multiplicity = 1;            // informational
};

// P_{k+1}(xi) = a_k xi^{k+1} + sum_{i=0}^{k-1} (a_{k-1-i} - b_{k-i}) xi^{k-i} - b_0
PolySpec build_polynomial(const quad::CoefficientSet& c);

// Sign changes in the nonzero coefficient sequence (coefficients within
// zero_tol of zero are skipped). Upper bound on positive roots counted
// with multiplicity, and equal to it mod 2.
int descartes_positive_bound(const PolySpec& p);

// Number of distinct real roots in (lo, hi] by Sturm sign variations.
// Endpoints that hit a root are nudged outward at ulp scale.
int sturm_count(const PolySpec& p, double lo, double hi);

// Cauchy bound: all real roots lie in (-B, B).
double root_upper_bound(const PolySpec& p);

// All distinct roots in (0, B], isolated by Sturm bisection and refined to
// width tol with a guarded Newton polish. Ascending order.
std::vector<PositiveRoot> isolate_and_refine(const PolySpec& p, double tol = 1e-10);

}  // namespace hammerfix::poly
