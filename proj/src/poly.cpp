#include "hammerfix/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hammerfix::poly {

namespace {

using mp_float = boost::multiprecision::cpp_bin_float_50;
using Coeffs = std::vector<double>;  // descending degree

// Relative band below which a double-chain sign evaluation is not trusted
// and is redone in extended precision.
constexpr double kSignBand = 1e-12;
// Normalized-remainder norm below which the Sturm chain is cut (numeric gcd).
// The chain is built in extended precision: double-precision Euclidean
// remainder sequences lose all accuracy around degree 8.
const double kChainCut = 1e-35;

double max_abs(const Coeffs& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::fabs(v));
    return m;
}

double horner(const Coeffs& c, double x) {
    double r = 0.0;
    for (double v : c) r = r * x + v;
    return r;
}

// Horner value together with a magnitude bound sum |c_i| |x|^i, used to
// decide whether the computed sign is trustworthy.
std::pair<double, double> horner_with_mag(const Coeffs& c, double x) {
    double r = 0.0, m = 0.0;
    const double ax = std::fabs(x);
    for (double v : c) {
        r = r * x + v;
        m = m * ax + std::fabs(v);
    }
    return {r, m};
}

Coeffs derivative(const Coeffs& c) {
    const int n = static_cast<int>(c.size()) - 1;  // degree
    if (n <= 0) return {0.0};
    Coeffs d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] * (n - i);
    return d;
}

using MpCoeffs = std::vector<mp_float>;

mp_float mp_max_abs(const MpCoeffs& c) {
    mp_float m = 0;
    for (const mp_float& v : c) m = std::max(m, boost::multiprecision::abs(v));
    return m;
}

MpCoeffs mp_derivative(const MpCoeffs& c) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {mp_float(0)};
    MpCoeffs d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] * (n - i);
    return d;
}

void mp_normalize(MpCoeffs& c) {
    mp_float m = mp_max_abs(c);
    if (m > 0)
        for (mp_float& v : c) v /= m;
}

// Remainder of u / v (descending coefficients), leading entries trimmed.
MpCoeffs mp_rem(MpCoeffs u, const MpCoeffs& v) {
    const std::size_t dv = v.size() - 1;
    while (u.size() > dv) {
        mp_float factor = u[0] / v[0];
        for (std::size_t j = 0; j < v.size(); ++j)
            u[j] -= factor * v[j];
        u.erase(u.begin());
    }
    while (u.size() > 1 && u[0] == 0)
        u.erase(u.begin());
    return u;
}

struct SturmChain {
    std::vector<Coeffs> polys;         // double mirrors for fast sign evaluation
    std::vector<MpCoeffs> mp_polys;

    const MpCoeffs& mp_at(std::size_t i) const { return mp_polys[i]; }
};

SturmChain build_chain(const Coeffs& c) {
    SturmChain chain;
    MpCoeffs p0(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) p0[j] = c[j];
    mp_normalize(p0);
    chain.mp_polys.push_back(p0);
    if (p0.size() > 1) {
        MpCoeffs p1 = mp_derivative(p0);
        mp_normalize(p1);
        chain.mp_polys.push_back(std::move(p1));
        while (chain.mp_polys.back().size() > 1) {
            MpCoeffs r = mp_rem(chain.mp_polys[chain.mp_polys.size() - 2],
                                chain.mp_polys.back());
            for (mp_float& v : r) v = -v;
            if (mp_max_abs(r) < kChainCut)
                break;  // numeric gcd reached
            mp_normalize(r);
            chain.mp_polys.push_back(std::move(r));
        }
    }
    chain.polys.reserve(chain.mp_polys.size());
    for (const MpCoeffs& q : chain.mp_polys) {
        Coeffs d(q.size());
        for (std::size_t j = 0; j < q.size(); ++j)
            d[j] = q[j].convert_to<double>();
        chain.polys.push_back(std::move(d));
    }
    return chain;
}

// Sign of chain entry i at x: -1, 0, +1. Falls back to extended precision
// when the double evaluation sits inside the cancellation band.
int chain_sign(const SturmChain& chain, std::size_t i, double x) {
    auto [v, mag] = horner_with_mag(chain.polys[i], x);
    if (mag == 0.0) return 0;
    if (std::fabs(v) > kSignBand * mag)
        return v > 0.0 ? 1 : -1;
    const std::vector<mp_float>& q = chain.mp_at(i);
    mp_float r = 0;
    for (const mp_float& cv : q) r = r * x + cv;
    mp_float band = mp_float(mag) * 1e-45;
    if (boost::multiprecision::abs(r) <= band)
        return 0;
    return r > 0 ? 1 : -1;
}

int variations(const SturmChain& chain, double x) {
    int count = 0;
    int last = 0;
    for (std::size_t i = 0; i < chain.polys.size(); ++i) {
        int s = chain_sign(chain, i, x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// Nudge an endpoint off a root of the leading chain polynomial.
double nudge_off_root(const SturmChain& chain, double x, double direction) {
    double step = std::max(std::fabs(x), 1.0) * std::numeric_limits<double>::epsilon() * 4.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (chain_sign(chain, 0, x) != 0) return x;
        x += direction * step;
        step *= 2.0;
    }
    throw SignUndecidable("sturm_count: endpoint sign undecidable after nudging");
}

// Variations just above x, so intervals are consistently half-open (lo, hi].
int vars_above(const SturmChain& chain, double x) {
    return variations(chain, nudge_off_root(chain, x, +1.0));
}

int count_in(const SturmChain& chain, double lo, double hi) {
    return vars_above(chain, lo) - vars_above(chain, hi);
}

int estimate_multiplicity(const PolySpec& p, double root) {
    Coeffs c = p.coeffs;
    const double band = 1e-7;
    int mult = 0;
    while (c.size() > 1) {
        double mag = 0.0;
        double v = 0.0;
        const double ax = std::fabs(root);
        for (double cv : c) {
            v = v * root + cv;
            mag = mag * ax + std::fabs(cv);
        }
        if (mag == 0.0 || std::fabs(v) > band * mag) break;
        ++mult;
        c = derivative(c);
    }
    return std::max(mult, 1);
}

}  // namespace

PolySpec::PolySpec(std::vector<double> c, double ztol) : coeffs(std::move(c)), zero_tol(ztol) {
    while (coeffs.size() > 1 && std::fabs(coeffs.front()) <= zero_tol)
        coeffs.erase(coeffs.begin());
    if (coeffs.empty() || max_abs(coeffs) == 0.0)
        throw std::invalid_argument("PolySpec: zero polynomial");
    k = degree() - 1;
}

double PolySpec::eval(double x) const { return horner(coeffs, x); }
double PolySpec::eval_derivative(double x) const { return horner(derivative(coeffs), x); }
double PolySpec::scale() const { return max_abs(coeffs); }

PolySpec build_polynomial(const quad::CoefficientSet& c) {
    const int k = c.k;
    std::vector<double> coeffs(static_cast<std::size_t>(k) + 2);
    coeffs[0] = c.a[static_cast<std::size_t>(k)];              // xi^{k+1}
    for (int i = 0; i <= k - 1; ++i)                           // xi^{k-i}
        coeffs[static_cast<std::size_t>(i) + 1] =
            c.a[static_cast<std::size_t>(k - 1 - i)] - c.b[static_cast<std::size_t>(k - i)];
    coeffs[static_cast<std::size_t>(k) + 1] = -c.b[0];         // constant
    PolySpec p(std::move(coeffs), 10.0 * c.quadrature_tol);
    p.k = k;
    return p;
}

int descartes_positive_bound(const PolySpec& p) {
    int count = 0;
    int last = 0;
    for (double c : p.coeffs) {
        if (std::fabs(c) <= p.zero_tol || c == 0.0) continue;
        int s = c > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

int sturm_count(const PolySpec& p, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("sturm_count: need lo < hi");
    SturmChain chain = build_chain(p.coeffs);
    return count_in(chain, lo, hi);
}

double root_upper_bound(const PolySpec& p) {
    double m = 0.0;
    for (std::size_t i = 1; i < p.coeffs.size(); ++i)
        m = std::max(m, std::fabs(p.coeffs[i] / p.coeffs[0]));
    return 1.0 + m;
}

std::vector<PositiveRoot> isolate_and_refine(const PolySpec& p, double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("isolate_and_refine: tol must be positive");
    SturmChain chain = build_chain(p.coeffs);
    const double bound = root_upper_bound(p);

    // Track variation counts at the endpoints and clamp midpoint counts into
    // [vhi, vlo]. Near a numerically multiple root the raw counts can jitter;
    // monotonizing keeps the bisection invariant (vlo - vhi roots inside) intact.
    struct Interval { double lo, hi; int vlo, vhi; };
    std::vector<Interval> pending;
    std::vector<Interval> isolated;
    {
        int vlo = vars_above(chain, 0.0);
        int vhi = vars_above(chain, bound);
        if (vlo > vhi) pending.push_back({0.0, bound, vlo, vhi});
    }

    while (!pending.empty()) {
        Interval iv = pending.back();
        pending.pop_back();
        if (iv.vlo - iv.vhi == 1) {
            isolated.push_back(iv);
            continue;
        }
        if (iv.hi - iv.lo < 1e-13 * (1.0 + std::fabs(iv.hi))) {
            // Unresolvable cluster; report as a single root.
            isolated.push_back(iv);
            continue;
        }
        double mid = 0.5 * (iv.lo + iv.hi);
        int vm = std::clamp(vars_above(chain, mid), iv.vhi, iv.vlo);
        if (iv.vlo > vm) pending.push_back({iv.lo, mid, iv.vlo, vm});
        if (vm > iv.vhi) pending.push_back({mid, iv.hi, vm, iv.vhi});
    }

    std::sort(isolated.begin(), isolated.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });

    std::vector<PositiveRoot> roots;
    roots.reserve(isolated.size());
    for (const Interval& iv : isolated) {
        double lo = iv.lo, hi = iv.hi;
        int vlo = iv.vlo, vhi = iv.vhi;
        const bool sign_change = p.eval(lo) * p.eval(hi) < 0.0;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;  // hit double resolution
            if (sign_change) {
                if (p.eval(lo) * p.eval(mid) <= 0.0) hi = mid; else lo = mid;
            } else {
                int vm = std::clamp(vars_above(chain, mid), vhi, vlo);
                if (vm < vlo) { hi = mid; vhi = vm; } else { lo = mid; vlo = vm; }
            }
        }

        PositiveRoot r;
        r.lo = lo;
        r.hi = hi;
        r.value = 0.5 * (lo + hi);
        // Guarded Newton polish inside the enclosure.
        for (int it = 0; it < 8; ++it) {
            double fv = p.eval(r.value);
            double dv = p.eval_derivative(r.value);
            if (dv == 0.0) break;
            double next = r.value - fv / dv;
            if (next <= lo || next >= hi || std::fabs(p.eval(next)) >= std::fabs(fv)) break;
            r.value = next;
        }
        r.poly_residual = std::fabs(p.eval(r.value));
        r.sign_confirmed = true;  // sign change or Sturm count 1 over [lo,hi]
        (void)sign_change;
        r.multiplicity = estimate_multiplicity(p, r.value);
        roots.push_back(r);
    }
    return roots;
}

}  // namespace hammerfix::poly
