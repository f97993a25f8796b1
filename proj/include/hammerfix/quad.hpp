#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hammerfix/expr.hpp"

namespace hammerfix::quad {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate rank-2 kernel K(t,u) = phi1(t) psi1(u) + phi2(t) psi2(u)
// together with the operator power k.
struct KernelSpec {
    expr::Expression phi1, phi2, psi1, psi2;
    int k;

    // Grid-based cone membership check of all four factors; throws on failure.
    void validate(int cone_grid = 1001) const;
};

struct CoefficientSet {
    std::vector<double> a;  // indexed 0..k
    std::vector<double> b;  // indexed 0..k
    std::vector<double> d;  // d[i-1] stores d_i = a[i-1] - b[i], i = 1..k
    int k = 0;
    double quadrature_tol = 0.0;

    double d_at(int i) const { return d.at(static_cast<std::size_t>(i) - 1); }

    // Fills d from a and b.
    void finalize();
};

// Adaptive Gauss-Legendre integration of f over [0,1] to absolute error
// <= tol. Deterministic for fixed inputs.
double integrate(const std::function<double(double)>& f, double tol);

// Exact binomial coefficient C(k,i); throws on overflow.
std::uint64_t binomial(int k, int i);

// a[i] = C(k,i) * int_0^1 psi1 phi1^{k-i} phi2^i du, likewise b with psi2.
// Throws "degenerate coefficient" if any a[i] or b[i] <= 10*tol.
CoefficientSet compute_coefficients(const KernelSpec& kernel, double tol = 1e-10);

}  // namespace hammerfix::quad
