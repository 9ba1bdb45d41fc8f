#ifndef MUBAND_NUMERIC_HPP
#define MUBAND_NUMERIC_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "muband/errors.hpp"

namespace muband {

inline constexpr double kPi = 3.14159265358979323846;

// Default number of sample points used by grid certificates.
inline constexpr int kDefaultGridPoints = 10000;

// Uniform sample grid over [lo, hi], endpoints included.
inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) {
        throw DomainError("uniform_grid: need points >= 2 and hi > lo");
    }
    std::vector<double> ts(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        ts[static_cast<std::size_t>(i)] = lo + step * i;
    }
    ts.back() = hi;
    return ts;
}

struct RootOptions {
    int scan_subdivisions = 64;   // initial bracket scan resolution
    double rel_tol = 1e-12;       // relative bracket width target
    int max_iterations = 200;
};

// Bisection on a bracket [lo, hi] known to contain a sign change.
// Runs until the bracket is below rel_tol * max(1, |root|) or the
// iteration cap is hit; either way the midpoint is returned.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     const RootOptions& opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NoRootError("bisect: no sign change on bracket [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    }
    for (int i = 0; i < opt.max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break; // bracket exhausted at double precision
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= opt.rel_tol * std::max(1.0, std::fabs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

// Scan [lo, hi] in opt.scan_subdivisions pieces for a sign change, then
// bisect inside the first sub-bracket that has one.
inline double scan_and_bisect(const std::function<double(double)>& f, double lo, double hi,
                              const RootOptions& opt = {}) {
    const int n = opt.scan_subdivisions;
    double prev_t = lo;
    double prev_f = f(lo);
    if (prev_f == 0.0) return lo;
    for (int i = 1; i <= n; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / n;
        const double ft = f(t);
        if (ft == 0.0) return t;
        if ((ft > 0.0) != (prev_f > 0.0)) {
            return bisect(f, prev_t, t, opt);
        }
        prev_t = t;
        prev_f = ft;
    }
    throw NoRootError("scan_and_bisect: no sign change found on scanned bracket [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// Classic cubic smoothstep and its derivative on [0, 1].
inline double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * (3.0 - 2.0 * s);
}

inline double smoothstep_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 6.0 * s * (1.0 - s);
}

// Exact integral of smoothstep over [0, s]; equals 1/2 at s = 1.
inline double smoothstep_integral(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 0.5 + (s - 1.0);
    return s * s * s * (1.0 - 0.5 * s);
}

// Locale-independent float formatting, 17 significant digits (lossless
// for binary64 round trips).
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_double(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

} // namespace muband

#endif // MUBAND_NUMERIC_HPP
