#ifndef MUBAND_SPLINE_HPP
#define MUBAND_SPLINE_HPP

#include <cstddef>
#include <vector>

#include "muband/errors.hpp"

namespace muband {

// Natural cubic spline through (x_i, y_i) with strictly increasing x.
// Used for custom-sampled warping functions; exposes value, first and
// second derivative.
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        if (n < 3 || ys_.size() != n) {
            throw DomainError("CubicSpline: need at least 3 samples with matching sizes");
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (!(xs_[i] > xs_[i - 1])) {
                throw DomainError("CubicSpline: sample abscissae must be strictly increasing");
            }
        }
        // Solve the tridiagonal system for second derivatives (natural ends).
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = xs_[i] - xs_[i - 1];
            const double h1 = xs_[i + 1] - xs_[i];
            sub[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            sup[i] = h1 / 6.0;
            rhs[i] = (ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0;
        }
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
        }
    }

    double domain_min() const { return xs_.front(); }
    double domain_max() const { return xs_.back(); }

    double value(double x) const {
        const auto [i, h, a, b] = locate(x);
        return a * ys_[i] + b * ys_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

    double deriv(double x) const {
        const auto [i, h, a, b] = locate(x);
        return (ys_[i + 1] - ys_[i]) / h -
               (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    }

    double second_deriv(double x) const {
        const auto [i, h, a, b] = locate(x);
        return a * m_[i] + b * m_[i + 1];
    }

private:
    struct Locator {
        std::size_t i;
        double h, a, b;
    };

    Locator locate(double x) const {
        if (x < xs_.front() || x > xs_.back()) {
            throw DomainError("CubicSpline: evaluation outside sample range");
        }
        std::size_t lo = 0, hi = xs_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (xs_[mid] <= x) lo = mid;
            else hi = mid;
        }
        const double h = xs_[lo + 1] - xs_[lo];
        const double a = (xs_[lo + 1] - x) / h;
        const double b = (x - xs_[lo]) / h;
        return {lo, h, a, b};
    }

    std::vector<double> xs_, ys_, m_;
};

} // namespace muband

#endif // MUBAND_SPLINE_HPP
