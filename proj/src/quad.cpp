#include "hammerfix/quad.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hammerfix::quad {

namespace {

constexpr int kGaussOrder = 15;
constexpr int kMaxDepth = 48;

struct GaussRule {
    std::array<double, kGaussOrder> node;    // on [-1,1]
    std::array<double, kGaussOrder> weight;
};

// Nodes and weights by Newton iteration on the Legendre polynomial.
GaussRule make_rule() {
    GaussRule r{};
    const int n = kGaussOrder;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weight[n - 1 - i] = r.weight[i];
    }
    return r;
}

const GaussRule& rule() {
    static const GaussRule r = make_rule();
    return r;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
    const GaussRule& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGaussOrder; ++i)
        s += r.weight[i] * f(mid + half * r.node[i]);
    return half * s;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_panel(f, a, mid);
    const double right = gauss_panel(f, mid, b);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= tol)
        return left + right;
    if (depth >= kMaxDepth)
        throw QuadratureError("integrate: no convergence after maximum subdivisions");
    return adapt(f, a, mid, left, 0.5 * tol, depth + 1) +
           adapt(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("integrate: tol must be positive");
    return adapt(f, 0.0, 1.0, gauss_panel(f, 0.0, 1.0), tol, 0);
}

std::uint64_t binomial(int k, int i) {
    if (i < 0 || k < 0 || i > k)
        throw std::invalid_argument("binomial: need 0 <= i <= k");
    if (i > k - i) i = k - i;
    std::uint64_t r = 1;
    for (int j = 1; j <= i; ++j) {
        unsigned __int128 num = static_cast<unsigned __int128>(r) *
                                static_cast<std::uint64_t>(k - i + j);
        unsigned __int128 q = num / static_cast<std::uint64_t>(j);  // always exact here
        if (q > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("binomial: result exceeds 64-bit range");
        r = static_cast<std::uint64_t>(q);
    }
    return r;
}

void KernelSpec::validate(int cone_grid) const {
    if (k < 2)
        throw std::invalid_argument("KernelSpec: k must be >= 2");
    const expr::Expression* exprs[] = {&phi1, &phi2, &psi1, &psi2};
    const char* names[] = {"phi1", "phi2", "psi1", "psi2"};
    for (int j = 0; j < 4; ++j) {
        expr::PositivityReport rep = expr::check_cone(*exprs[j], cone_grid);
        if (!rep.member())
            throw std::invalid_argument(
                std::string("KernelSpec: ") + names[j] +
                " is not in the cone C0+[0,1]: min " + std::to_string(rep.min_value) +
                " at t = " + std::to_string(rep.argmin));
    }
}

void CoefficientSet::finalize() {
    d.resize(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        d[static_cast<std::size_t>(i) - 1] = a[static_cast<std::size_t>(i) - 1] -
                                             b[static_cast<std::size_t>(i)];
}

CoefficientSet compute_coefficients(const KernelSpec& kernel, double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("compute_coefficients: tol must be positive");
    const int k = kernel.k;
    if (k < 2 || k > 64)
        throw std::invalid_argument("compute_coefficients: k out of supported range [2,64]");

    CoefficientSet c;
    c.k = k;
    c.quadrature_tol = tol;
    c.a.resize(static_cast<std::size_t>(k) + 1);
    c.b.resize(static_cast<std::size_t>(k) + 1);

    for (int i = 0; i <= k; ++i) {
        const double binom = static_cast<double>(binomial(k, i));
        auto weighted = [&](const expr::Expression& psi) {
            auto integrand = [&](double u) {
                double p1 = kernel.phi1.eval(u);
                double p2 = kernel.phi2.eval(u);
                return psi.eval(u) * std::pow(p1, k - i) * std::pow(p2, i);
            };
            return binom * integrate(integrand, tol);
        };
        c.a[static_cast<std::size_t>(i)] = weighted(kernel.psi1);
        c.b[static_cast<std::size_t>(i)] = weighted(kernel.psi2);
    }

    const double eps = 10.0 * tol;
    for (int i = 0; i <= k; ++i) {
        if (c.a[static_cast<std::size_t>(i)] <= eps || c.b[static_cast<std::size_t>(i)] <= eps)
            throw QuadratureError("degenerate coefficient: a[" + std::to_string(i) + "] = " +
                                  std::to_string(c.a[static_cast<std::size_t>(i)]) + ", b[" +
                                  std::to_string(i) + "] = " +
                                  std::to_string(c.b[static_cast<std::size_t>(i)]) +
                                  "; positive coefficients are required");
    }
    c.finalize();
    return c;
}

}  // namespace hammerfix::quad
