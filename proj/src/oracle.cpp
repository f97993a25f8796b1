#include "hammerfix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hammerfix::oracle {

namespace {

constexpr double kNewtonTol = 1e-11;
constexpr double kDedupeRadius = 1e-7;
constexpr double kPositiveFloor = 1e-9;
constexpr double kOverflowGuard = 1e100;

double form(const std::vector<double>& c, int k, double x, double y) {
    double r = c[static_cast<std::size_t>(k)];
    for (int i = k - 1; i >= 0; --i)
        r = r * y + c[static_cast<std::size_t>(i)] * std::pow(x, k - i);
    return r;
}

// Partial derivatives of sum c_i x^{k-i} y^i.
double form_dx(const std::vector<double>& c, int k, double x, double y) {
    double r = 0.0;
    for (int i = 0; i < k; ++i)
        r += c[static_cast<std::size_t>(i)] * (k - i) * std::pow(x, k - i - 1) * std::pow(y, i);
    return r;
}

double form_dy(const std::vector<double>& c, int k, double x, double y) {
    double r = 0.0;
    for (int i = 1; i <= k; ++i)
        r += c[static_cast<std::size_t>(i)] * i * std::pow(x, k - i) * std::pow(y, i - 1);
    return r;
}

double norm_inf(double a, double b) { return std::max(std::fabs(a), std::fabs(b)); }

std::optional<solver::PlanePoint> newton_from(const quad::CoefficientSet& c,
                                              solver::PlanePoint p) {
    const int k = c.k;
    // Polish past the acceptance threshold: near a tangential fixed point the
    // Jacobian is singular and the residual-delta relation is quadratic, so
    // stopping at the threshold would leave converged iterates scattered far
    // wider than the dedupe radius.
    solver::PlanePoint best = p;
    double best_fn = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 300; ++it) {
        double f1 = form(c.a, k, p.x, p.y) - p.x;
        double f2 = form(c.b, k, p.x, p.y) - p.y;
        double fn = norm_inf(f1, f2);
        if (!std::isfinite(fn) || norm_inf(p.x, p.y) > kOverflowGuard)
            break;
        if (fn < best_fn) {
            best = p;
            best_fn = fn;
        }
        if (fn == 0.0)
            break;
        double j11 = form_dx(c.a, k, p.x, p.y) - 1.0;
        double j12 = form_dy(c.a, k, p.x, p.y);
        double j21 = form_dx(c.b, k, p.x, p.y);
        double j22 = form_dy(c.b, k, p.x, p.y) - 1.0;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det))
            break;
        double dx = (f1 * j22 - f2 * j12) / det;
        double dy = (j11 * f2 - j21 * f1) / det;
        // Damping: halve the step until the residual decreases.
        double lambda = 1.0;
        bool stepped = false;
        for (int half = 0; half < 40; ++half) {
            double nx = p.x - lambda * dx;
            double ny = p.y - lambda * dy;
            double g1 = form(c.a, k, nx, ny) - nx;
            double g2 = form(c.b, k, nx, ny) - ny;
            if (std::isfinite(g1) && std::isfinite(g2) && norm_inf(g1, g2) < fn) {
                p.x = nx;
                p.y = ny;
                stepped = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!stepped)
            break;
    }
    if (best_fn <= kNewtonTol)
        return best;
    return std::nullopt;
}

}  // namespace

GridFunction GridFunction::constant(int n, double value) {
    GridFunction g;
    g.n = n;
    g.values.assign(static_cast<std::size_t>(n), value);
    return g;
}

double GridFunction::sup_distance(const GridFunction& other) const {
    double d = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        d = std::max(d, std::fabs(values[j] - other.values[j]));
    return d;
}

solver::PlanePoint q_map(const solver::PlanePoint& p, const quad::CoefficientSet& c) {
    solver::PlanePoint out;
    out.x = form(c.a, c.k, p.x, p.y);
    out.y = form(c.b, c.k, p.x, p.y);
    if (!std::isfinite(out.x) || !std::isfinite(out.y))
        throw std::overflow_error("q_map: overflow, iterate diverged");
    return out;
}

std::vector<solver::PlanePoint> newton_scan_q(const quad::CoefficientSet& c,
                                              const Rectangle& region,
                                              int starts_per_axis) {
    if (region.x_lo <= 0.0 || region.y_lo <= 0.0 || region.x_hi <= region.x_lo ||
        region.y_hi <= region.y_lo)
        throw std::invalid_argument("newton_scan_q: region must lie in the positive quadrant");
    if (starts_per_axis < 2)
        throw std::invalid_argument("newton_scan_q: starts_per_axis must be >= 2");

    std::vector<solver::PlanePoint> starts;
    for (int i = 0; i < starts_per_axis; ++i) {
        for (int j = 0; j < starts_per_axis; ++j) {
            double fx = static_cast<double>(i) / (starts_per_axis - 1);
            double fy = static_cast<double>(j) / (starts_per_axis - 1);
            starts.push_back({region.x_lo + fx * (region.x_hi - region.x_lo),
                              region.y_lo + fy * (region.y_hi - region.y_lo)});
        }
    }
    // Seeds at each polynomial root's reconstructed point; a tangential fixed
    // point has a singular Jacobian and a grid start may slide past it.
    poly::PolySpec p = poly::build_polynomial(c);
    for (const poly::PositiveRoot& r : poly::isolate_and_refine(p))
        starts.push_back(solver::root_to_point(r.value, c));

    std::vector<solver::PlanePoint> found;
    for (const solver::PlanePoint& s : starts) {
        auto converged = newton_from(c, s);
        if (!converged) continue;
        if (converged->x <= kPositiveFloor || converged->y <= kPositiveFloor) continue;
        bool duplicate = false;
        for (const solver::PlanePoint& q : found) {
            if (norm_inf(q.x - converged->x, q.y - converged->y) <= kDedupeRadius) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) found.push_back(*converged);
    }
    std::sort(found.begin(), found.end(),
              [](const solver::PlanePoint& a, const solver::PlanePoint& b) { return a.x < b.x; });
    return found;
}

GridFunction apply_operator_grid(const GridFunction& f, const quad::KernelSpec& kernel) {
    const int n = f.n;
    if (n < 3)
        throw std::invalid_argument("apply_operator_grid: grid too small");
    for (double v : f.values)
        if (v < 0.0)
            throw std::invalid_argument("apply_operator_grid: f must be nonnegative");

    const int k = kernel.k;
    const double h = 1.0 / (n - 1);

    // Composite Simpson over node values of psi * f^k; trapezoid on the last
    // panel when the panel count is odd.
    auto integral = [&](const expr::Expression& psi) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            g[static_cast<std::size_t>(j)] =
                psi.eval(j * h) * std::pow(f.values[static_cast<std::size_t>(j)], k);
        double s = 0.0;
        int j = 0;
        for (; j + 2 < n; j += 2)
            s += h / 3.0 * (g[static_cast<std::size_t>(j)] +
                            4.0 * g[static_cast<std::size_t>(j) + 1] +
                            g[static_cast<std::size_t>(j) + 2]);
        if (j + 1 < n)
            s += 0.5 * h * (g[static_cast<std::size_t>(j)] + g[static_cast<std::size_t>(j) + 1]);
        return s;
    };

    const double c1 = integral(kernel.psi1);
    const double c2 = integral(kernel.psi2);

    GridFunction out;
    out.n = n;
    out.values.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            c1 * kernel.phi1.eval(j * h) + c2 * kernel.phi2.eval(j * h);
    return out;
}

std::optional<GridFunction> picard(const quad::KernelSpec& kernel, const GridFunction& seed,
                                   int max_iter, double tol) {
    bool nontrivial = false;
    for (double v : seed.values) {
        if (v < 0.0)
            throw std::invalid_argument("picard: seed must be nonnegative");
        if (v > 0.0) nontrivial = true;
    }
    if (!nontrivial)
        throw std::invalid_argument("picard: seed must not be identically zero");

    GridFunction f = seed;
    for (int it = 0; it < max_iter; ++it) {
        GridFunction next = apply_operator_grid(f, kernel);
        double peak = 0.0;
        for (double v : next.values) peak = std::max(peak, std::fabs(v));
        if (!std::isfinite(peak) || peak > kOverflowGuard)
            return std::nullopt;  // divergence
        if (next.sup_distance(f) <= tol)
            return next;
        f = std::move(next);
    }
    return std::nullopt;
}

OracleReport run(const quad::KernelSpec& kernel, const solver::SolveReport& report,
                 int starts_per_axis, int picard_seeds) {
    OracleReport out;

    double radius = 1.0;
    for (const solver::FixedPointFn& f : report.fixed_points)
        radius = std::max(radius, std::max(f.x0, f.y0));
    Rectangle region{1e-6, 2.0 * radius, 1e-6, 2.0 * radius};
    out.newton_starts = starts_per_axis * starts_per_axis;
    out.q_fixed_points = newton_scan_q(report.coefficients, region, starts_per_axis);
    out.newton_converged = static_cast<int>(out.q_fixed_points.size());
    out.match = out.newton_converged == report.n_fix;

    out.picard_seeds = picard_seeds;
    for (int s = 0; s < picard_seeds; ++s) {
        GridFunction seed = GridFunction::constant(201, 0.5 * (s + 1));
        if (auto limit = picard(kernel, seed, 1000, 1e-10)) {
            ++out.picard_converged;
            out.picard_limits.push_back(std::move(*limit));
        }
    }
    return out;
}

}  // namespace hammerfix::oracle
