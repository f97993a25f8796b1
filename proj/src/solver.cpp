#include "hammerfix/solver.hpp"

#include <cmath>

namespace hammerfix::solver {

namespace {

// sum c_i x^{k-i} y^i, Horner in y with coefficients c_i x^{k-i}.
double homogeneous_form(const std::vector<double>& c, int k, double x, double y) {
    double r = c[static_cast<std::size_t>(k)];
    for (int i = k - 1; i >= 0; --i)
        r = r * y + c[static_cast<std::size_t>(i)] * std::pow(x, k - i);
    return r;
}

}  // namespace

std::string to_string(Classification c) {
    switch (c) {
        case Classification::UniqueBySignPattern:       return "UNIQUE_BY_SIGN_PATTERN";
        case Classification::AtMost3ByMonotoneDecrease: return "AT_MOST_3_BY_MONOTONE_DECREASE";
        case Classification::BracketImpliesGe2:         return "BRACKET_IMPLIES_GE_2";
        case Classification::General:                   return "GENERAL";
    }
    return "GENERAL";
}

PlanePoint root_to_point(double xi0, const quad::CoefficientSet& c) {
    if (xi0 <= 0.0)
        throw std::invalid_argument("root_to_point: xi0 must be positive");
    if (c.k < 2)
        throw std::invalid_argument("root_to_point: k must be >= 2");
    double sum = 0.0;
    for (int i = c.k; i >= 0; --i)
        sum = sum * xi0 + c.a[static_cast<std::size_t>(i)];
    PlanePoint p;
    p.x = std::pow(sum, -1.0 / (c.k - 1));
    p.y = xi0 * p.x;
    return p;
}

double verify_q(const PlanePoint& p, const quad::CoefficientSet& c) {
    double q1 = homogeneous_form(c.a, c.k, p.x, p.y);
    double q2 = homogeneous_form(c.b, c.k, p.x, p.y);
    return std::max(std::fabs(q1 - p.x), std::fabs(q2 - p.y));
}

FixedPointFn reconstruct(const PlanePoint& p, const quad::KernelSpec& kernel, int grid) {
    if (p.x <= 0.0 || p.y <= 0.0)
        throw std::invalid_argument("reconstruct: point must be componentwise positive");
    if (grid < 2)
        throw std::invalid_argument("reconstruct: grid must be >= 2");
    FixedPointFn f;
    f.x0 = p.x;
    f.y0 = p.y;
    f.xi = p.y / p.x;
    f.samples.reserve(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j) {
        double t = static_cast<double>(j) / (grid - 1);
        f.samples.emplace_back(t, p.x * kernel.phi1.eval(t) + p.y * kernel.phi2.eval(t));
    }
    return f;
}

double verify_operator(FixedPointFn& f, const quad::KernelSpec& kernel, double tol) {
    if (f.samples.empty())
        throw std::invalid_argument("verify_operator: fixed point has no samples");
    if (tol <= 0.0)
        throw std::invalid_argument("verify_operator: tol must be positive");
    const int k = kernel.k;
    auto fk = [&](double u) {
        double v = f.x0 * kernel.phi1.eval(u) + f.y0 * kernel.phi2.eval(u);
        return std::pow(v, k);
    };
    double c1 = quad::integrate([&](double u) { return kernel.psi1.eval(u) * fk(u); }, tol);
    double c2 = quad::integrate([&](double u) { return kernel.psi2.eval(u) * fk(u); }, tol);
    double sup = 0.0;
    for (const auto& [t, ft] : f.samples) {
        double hf = c1 * kernel.phi1.eval(t) + c2 * kernel.phi2.eval(t);
        sup = std::max(sup, std::fabs(hf - ft));
    }
    f.residual_sup = sup;
    return sup;
}

ClassificationFacts classify(const quad::CoefficientSet& c) {
    ClassificationFacts facts;
    const double ztol = 10.0 * c.quadrature_tol;
    const int k = c.k;

    // Sign pattern: d_i <= 0 for i <= i0, d_i >= 0 for i > i0, with i0 = 0
    // covering the all-nonnegative case. Together with a_k > 0 and b_0 > 0 this
    // gives exactly one Descartes sign change, hence a unique positive root.
    for (int i0 = 0; i0 <= k && !facts.sign_pattern; ++i0) {
        bool ok = true;
        for (int i = 1; i <= i0 && ok; ++i) ok = c.d_at(i) <= ztol;
        for (int i = i0 + 1; i <= k && ok; ++i) ok = c.d_at(i) >= -ztol;
        facts.sign_pattern = ok;
    }

    facts.d_nondecreasing = true;
    facts.d_nonincreasing = true;
    for (int i = 1; i < k; ++i) {
        if (c.d_at(i) > c.d_at(i + 1) + ztol) facts.d_nondecreasing = false;
        if (c.d_at(i) < c.d_at(i + 1) - ztol) facts.d_nonincreasing = false;
    }

    // Bracket scan on a log-spaced grid over (0, B].
    poly::PolySpec p = poly::build_polynomial(c);
    const double bound = poly::root_upper_bound(p);
    bool seen_positive = false;
    for (int j = 0; j < 256; ++j) {
        double xi = bound * std::pow(10.0, -9.0 * (1.0 - j / 255.0));
        double v = p.eval(xi);
        if (v > 0.0) seen_positive = true;
        else if (seen_positive && v <= 0.0) { facts.bracket_found = true; break; }
    }

    if (facts.sign_pattern || facts.d_nondecreasing)
        facts.verdict = Classification::UniqueBySignPattern;
    else if (facts.bracket_found)
        facts.verdict = Classification::BracketImpliesGe2;
    else if (facts.d_nonincreasing)
        facts.verdict = Classification::AtMost3ByMonotoneDecrease;
    else
        facts.verdict = Classification::General;
    return facts;
}

SolveReport solve(const quad::KernelSpec& kernel, const SolveOptions& opts) {
    SolveReport report;
    try {
        kernel.validate(opts.cone_grid);
    } catch (const std::exception& e) {
        throw StageError("validation", e.what());
    }
    report.kernel_sources = {kernel.phi1.source(), kernel.phi2.source(),
                             kernel.psi1.source(), kernel.psi2.source()};
    report.k = kernel.k;

    try {
        report.coefficients = quad::compute_coefficients(kernel, opts.quad_tol);
    } catch (const std::exception& e) {
        throw StageError("coefficients", e.what());
    }

    try {
        report.polynomial = poly::build_polynomial(report.coefficients);
        report.descartes_bound = poly::descartes_positive_bound(report.polynomial);
        report.roots = poly::isolate_and_refine(report.polynomial, opts.root_tol);
    } catch (const std::exception& e) {
        throw StageError("roots", e.what());
    }

    try {
        for (const poly::PositiveRoot& r : report.roots) {
            PlanePoint p = root_to_point(r.value, report.coefficients);
            double q_res = verify_q(p, report.coefficients);
            if (q_res > 1e-8)
                throw std::runtime_error("fixed point of Q_k failed residual check: " +
                                         std::to_string(q_res));
            FixedPointFn f = reconstruct(p, kernel, opts.report_grid);
            double op_res = verify_operator(f, kernel, opts.quad_tol);
            if (op_res > opts.residual_tol)
                throw std::runtime_error("operator residual " + std::to_string(op_res) +
                                         " exceeds bound " + std::to_string(opts.residual_tol));
            report.fixed_points.push_back(std::move(f));
        }
    } catch (const std::exception& e) {
        throw StageError("reconstruction", e.what());
    }

    report.classification = classify(report.coefficients);
    report.n_fix = static_cast<int>(report.fixed_points.size());

    // Consistency with the count bounds and the advisory classification.
    const int k = kernel.k;
    if (report.n_fix < 1 || report.n_fix > k + 1)
        throw StageError("consistency", "n_fix = " + std::to_string(report.n_fix) +
                                            " outside [1, k+1]");
    if (report.classification.verdict == Classification::UniqueBySignPattern &&
        report.n_fix != 1)
        throw StageError("consistency", "sign pattern promises uniqueness but n_fix = " +
                                            std::to_string(report.n_fix));
    if (report.classification.verdict == Classification::AtMost3ByMonotoneDecrease &&
        report.n_fix > 3)
        throw StageError("consistency", "monotone decrease promises <= 3 but n_fix = " +
                                            std::to_string(report.n_fix));
    if (report.classification.bracket_found && report.n_fix < 2)
        throw StageError("consistency", "bracket promises >= 2 but n_fix = " +
                                            std::to_string(report.n_fix));
    return report;
}

}  // namespace hammerfix::solver
