#ifndef MUBAND_WIDTH_BOUNDS_HPP
#define MUBAND_WIDTH_BOUNDS_HPP

#include <cmath>
#include <string>

#include "muband/errors.hpp"
#include "muband/numeric.hpp"

namespace muband {

// Classical width ceiling 2*pi/(sqrt(kappa) n) for scal >= kappa n(n-1).
inline double classical_bound(int n, double kappa) {
    if (n < 2) throw DomainError("classical_bound: need n >= 2");
    if (!(kappa > 0.0)) throw DomainError("classical_bound: need kappa > 0");
    return 2.0 * kPi / (std::sqrt(kappa) * n);
}

enum class WidthBoundKind { Classical, NonnegAmbient, NegativeAmbient };

struct WidthBound {
    WidthBoundKind kind;
    int n = 0;
    double kappa = 0.0;
    double sigma = 0.0;     // 0 for the non-negative ambient bound
    double d = 0.0;
    double value = 0.0;     // the length ell (or 2*pi/(sqrt(kappa) n))
    double residual = 0.0;  // defining-equation residual at `value`
    bool divergent = false; // value overflowed / not representable
    bool divergence_note = false; // sigma within 1e-12 of its threshold
};

namespace detail {

inline void check_middle_width(int n, double kappa, double d) {
    if (n < 2 || n > 7) throw DomainError("width bound: need 2 <= n <= 7");
    if (!(kappa > 0.0)) throw DomainError("width bound: need kappa > 0");
    const double dmax = 2.0 * kPi / (std::sqrt(kappa) * n);
    if (!(d > 0.0 && d < dmax)) {
        throw DomainError("width bound: need 0 < d < 2*pi/(sqrt(kappa) n) = " +
                          format_double(dmax) + ", got d = " + format_double(d));
    }
}

// Left-hand side of both matching equations: the spherical potential at
// the midpoint -d/2, i.e. sqrt(kappa) (n-1) tan(sqrt(kappa) n d / 4).
inline double spherical_midpoint_potential(int n, double kappa, double d) {
    return std::sqrt(kappa) * (n - 1) * std::tan(0.25 * std::sqrt(kappa) * n * d);
}

} // namespace detail

// Length bound for a scalar-flat cap next to a segment with
// scal >= kappa n(n-1) of width d:  ell = 2/(sqrt(kappa) n) cot(sqrt(kappa) n d/4).
inline WidthBound ell_nonneg(int n, double kappa, double d) {
    detail::check_middle_width(n, kappa, d);
    WidthBound wb;
    wb.kind = WidthBoundKind::NonnegAmbient;
    wb.n = n;
    wb.kappa = kappa;
    wb.d = d;
    const double tanv = std::tan(0.25 * std::sqrt(kappa) * n * d);
    wb.value = 2.0 / (std::sqrt(kappa) * n * tanv);
    wb.divergent = !std::isfinite(wb.value) || !(wb.value > 0.0);
    if (!wb.divergent) {
        // Residual of the cap/middle matching identity the value solves:
        // h_cone(ell) = 2(n-1)/(n ell) equals the spherical midpoint value.
        wb.residual = std::fabs(2.0 * (n - 1) / (static_cast<double>(n) * wb.value) -
                                detail::spherical_midpoint_potential(n, kappa, d));
    }
    return wb;
}

// Threshold on sigma below which the negative-ambient bound exists.
inline double ell_negative_threshold(int n, double kappa, double d) {
    detail::check_middle_width(n, kappa, d);
    const double tanv = std::tan(0.25 * std::sqrt(kappa) * n * d);
    return kappa * n * (n - 1) * tanv * tanv;
}

// Length bound for a hyperbolic cap (ambient scal >= -sigma): solves
//   sqrt(kappa)(n-1) tan(sqrt(kappa) n d/4)
//     = sqrt(sigma(n-1)/n) coth(sqrt(sigma n) ell / (2 sqrt(n-1)))
// for ell by bracket-scanned bisection.
inline WidthBound ell_negative(int n, double kappa, double sigma, double d,
                               const RootOptions& opt = {}) {
    detail::check_middle_width(n, kappa, d);
    if (!(sigma > 0.0)) throw DomainError("ell_negative: need sigma > 0");
    const double threshold = ell_negative_threshold(n, kappa, d);
    if (!(sigma < threshold)) {
        throw ThresholdError("ell_negative: sigma = " + format_double(sigma) +
                             " must stay strictly below the threshold " +
                             format_double(threshold) + " = kappa n(n-1) tan^2(sqrt(kappa) n d/4)");
    }

    WidthBound wb;
    wb.kind = WidthBoundKind::NegativeAmbient;
    wb.n = n;
    wb.kappa = kappa;
    wb.sigma = sigma;
    wb.d = d;
    wb.divergence_note = (threshold - sigma) <= 1e-12 * std::max(1.0, threshold);

    const double lhs = detail::spherical_midpoint_potential(n, kappa, d);
    const double pref = std::sqrt(sigma * (n - 1) / n);
    const double rate = std::sqrt(sigma * n) / (2.0 * std::sqrt(n - 1.0));
    const auto f = [&](double ell) { return pref / std::tanh(rate * ell) - lhs; };

    // The equation can be steep in ell; running the bracket down to
    // machine precision keeps the residual below 1e-10 uniformly.
    RootOptions tight = opt;
    tight.rel_tol = 1e-16;

    // Geometric bracket scan: f is strictly decreasing from +inf to
    // pref - lhs < 0, so a sign change always sits inside a wide enough
    // logarithmic window around the natural length 1/rate. The window is
    // generous because the root in rate-units shrinks like sqrt(sigma)
    // for small sigma.
    const double lo0 = 1e-18 / rate;
    const double hi0 = 1e+18 / rate;
    double prev = lo0;
    double fprev = f(prev);
    double root = std::numeric_limits<double>::quiet_NaN();
    const int scans = opt.scan_subdivisions;
    for (int i = 1; i <= scans; ++i) {
        const double t = lo0 * std::pow(hi0 / lo0, static_cast<double>(i) / scans);
        const double ft = f(t);
        if (ft == 0.0) { root = t; break; }
        if ((ft > 0.0) != (fprev > 0.0)) {
            root = bisect(f, prev, t, tight);
            break;
        }
        prev = t;
        fprev = ft;
    }
    if (!std::isfinite(root)) {
        throw NoRootError("ell_negative: no sign change on scanned bracket [" +
                          format_double(lo0) + ", " + format_double(hi0) + "]");
    }
    wb.value = root;
    wb.residual = std::fabs(pref / std::tanh(rate * root) - lhs);
    wb.divergent = !std::isfinite(root);
    return wb;
}

} // namespace muband

#endif // MUBAND_WIDTH_BOUNDS_HPP
