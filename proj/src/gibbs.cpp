#include "hammerfix/gibbs.hpp"

#include <cmath>
#include <cstdio>

namespace hammerfix::gibbs {

namespace {

void check_model(const GibbsModel& m, int min_k) {
    if (m.a <= 0.0 || m.b <= 0.0)
        throw std::invalid_argument("GibbsModel: a and b must be positive");
    if (m.k < min_k)
        throw std::invalid_argument("GibbsModel: k must be >= " + std::to_string(min_k));
    if (m.beta <= 0.0)
        throw std::invalid_argument("GibbsModel: beta must be positive");
}

std::string number_source(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

quad::CoefficientSet gibbs_coefficients(const GibbsModel& m) {
    check_model(m, 1);
    quad::CoefficientSet c;
    c.k = m.k;
    c.quadrature_tol = 0.0;  // closed form, no quadrature error
    c.a.resize(static_cast<std::size_t>(m.k) + 1);
    c.b.resize(static_cast<std::size_t>(m.k) + 1);
    for (int i = 0; i <= m.k; ++i) {
        double binom = static_cast<double>(quad::binomial(m.k, i));
        c.a[static_cast<std::size_t>(i)] = m.a * binom / (i + 1);
        c.b[static_cast<std::size_t>(i)] = m.b * binom / (i + 2);
    }
    c.finalize();
    return c;
}

std::vector<double> gibbs_d(const GibbsModel& m) {
    check_model(m, 1);
    std::vector<double> d(static_cast<std::size_t>(m.k));
    for (int i = 1; i <= m.k; ++i) {
        double binom = static_cast<double>(quad::binomial(m.k, i));
        d[static_cast<std::size_t>(i) - 1] =
            binom * (m.a / (m.k - i + 1) - m.b / (i + 2));
    }
    return d;
}

std::pair<double, bool> h_function_check(const GibbsModel& m, int samples) {
    check_model(m, 1);
    if (samples < 2)
        throw std::invalid_argument("h_function_check: samples must be >= 2");
    auto h = [&](double x) { return m.a / (m.k - x + 1) - m.b / (x + 2); };
    auto h_prime = [&](double x) {
        double u = m.k - x + 1;
        double v = x + 2;
        return m.a / (u * u) + m.b / (v * v);
    };
    double min_hp = h_prime(1.0);
    for (int j = 1; j < samples; ++j) {
        double x = 1.0 + (m.k - 1.0) * j / (samples - 1);
        min_hp = std::min(min_hp, h_prime(x));
    }
    bool monotone = true;
    for (int i = 1; i < m.k; ++i)
        if (h(i) > h(i + 1)) monotone = false;
    return {min_hp, monotone};
}

quad::KernelSpec induced_kernel(const GibbsModel& m) {
    check_model(m, 2);
    return quad::KernelSpec{
        expr::Expression::parse("1"),
        expr::Expression::parse("t"),
        expr::Expression::parse(number_source(m.a)),
        expr::Expression::parse(number_source(m.b) + "*t"),
        m.k,
    };
}

GibbsReport analyze(const GibbsModel& m, const solver::SolveOptions& opts) {
    check_model(m, 1);
    GibbsReport report;
    report.model = m;
    report.coefficients = gibbs_coefficients(m);
    report.d = gibbs_d(m);

    auto [min_hp, monotone_h] = h_function_check(m, 101);
    report.h_derivative_min = min_hp;
    report.d_monotone_nondecreasing = true;
    for (std::size_t i = 0; i + 1 < report.d.size(); ++i)
        if (report.d[i] > report.d[i + 1]) report.d_monotone_nondecreasing = false;

    if (m.k >= 2) {
        solver::SolveReport sr = solver::solve(induced_kernel(m), opts);
        if (sr.n_fix != 1)
            throw ContradictionError(
                "analyze: n_fix = " + std::to_string(sr.n_fix) +
                " for the tree model; uniqueness of the translation-invariant "
                "Gibbs measure demands exactly 1 (solver bug or broken input)");
        report.n_tigm = 1;
        report.solve_report = std::move(sr);
    }
    return report;
}

}  // namespace hammerfix::gibbs
