#pragma once

// Reference computations used only by the tests. None of them call into the
// library; they exist so that expected values come from a second code path.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;
using Dense = std::vector<std::vector<double>>;

namespace detail {

inline double simpson_step(const Fn& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const Fn& f, double a, double b, double tol, int max_depth = 40) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Root of f on [lo, hi] given a sign change.
inline double bisect(const Fn& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Laplace expansion along the first row. Fine for d ≤ 8.
inline double cofactor_det(const Dense& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Dense minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(row);
        }
        det += ((c % 2) ? -1.0 : 1.0) * m[0][c] * cofactor_det(minor);
    }
    return det;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Dense gauss_jordan_inverse(Dense a) {
    const std::size_t n = a.size();
    Dense inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const double p = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= p;
            inv[c][k] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

/// p!/(p-n)! as a plain product.
inline double falling_factorial(int p, int n) {
    double out = 1.0;
    for (int k = 0; k < n; ++k) out *= p - k;
    return out;
}

inline double det_mean(int n, int p) { return falling_factorial(p, n); }

inline double det_variance(int n, int p) {
    return falling_factorial(p, n) * (falling_factorial(p + 2, n) - falling_factorial(p, n));
}

/// (1/2) sqrt(d(d+1) / ((d-n)(d-n+1)) - 1).
inline double closed_form_bound(double n, double d) {
    return 0.5 * std::sqrt(d * (d + 1) / ((d - n) * (d - n + 1)) - 1.0);
}

/// TV between chi-square laws with 1 and 2 degrees of freedom by quadrature.
/// The densities cross where a^{-1/2} sqrt(2/π) = 1; below that point the
/// first one dominates. Substituting a = t² removes the endpoint singularity.
inline double tv_chi2_1_vs_2(double tol = 1e-10) {
    const double crossing = bisect(
        [](double a) { return std::sqrt(2.0 / (std::numbers::pi * a)) - 1.0; }, 1e-6, 10.0);
    const Fn integrand = [](double t) {
        const double f1 = std::sqrt(2.0 / std::numbers::pi) * std::exp(-t * t / 2);
        const double f2 = t * std::exp(-t * t / 2);
        return f1 - f2;
    };
    return adaptive_simpson(integrand, 0.0, std::sqrt(crossing), tol);
}

/// Same value from its antiderivative.
inline double tv_chi2_1_vs_2_closed() {
    const double s = std::sqrt(1.0 / std::numbers::pi);
    return std::erf(s) - 1.0 + std::exp(-1.0 / std::numbers::pi);
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const Fn& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

/// ∫ over the 2×2 PSD cone of det^{(p-3)/2} exp(-tr/2). Coordinates are
/// a = u², c = v² on the diagonal and b = uv sin φ off it, which makes the
/// integrand smooth for p ≥ 4.
inline double wishart2_unnormalized_mass(int p, int panels = 160, double cutoff = 9.0) {
    const double e = (p - 3) / 2.0;
    const Fn over_u = [&](double u) {
        const Fn over_v = [&](double v) {
            const Fn over_phi = [&](double phi) {
                const double cs = std::cos(phi);
                return std::pow(u * u * v * v * cs * cs, e) * cs;
            };
            const double inner = simpson(over_phi, -std::numbers::pi / 2, std::numbers::pi / 2, panels);
            return inner * 4.0 * u * u * v * v * std::exp(-v * v / 2);
        };
        return simpson(over_v, 0.0, cutoff, panels) * std::exp(-u * u / 2);
    };
    return simpson(over_u, 0.0, cutoff, panels);
}

}  // namespace oracle
