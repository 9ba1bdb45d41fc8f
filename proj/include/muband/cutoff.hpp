#ifndef MUBAND_CUTOFF_HPP
#define MUBAND_CUTOFF_HPP

#include <cmath>

#include "muband/errors.hpp"
#include "muband/numeric.hpp"

namespace muband {

// Monotone reparametrization rho: R -> [a, b] used to flatten a potential
// near interval ends:
//   rho(t) = a            for t <= a - eps/2,
//   rho(t) = t            on [a + eps/2, b - eps/2],
//   rho(t) = b            for t >= b + eps/2,
// with 0 < rho' < 1 strictly inside both transition zones. The transition
// slope is the cubic smoothstep, whose integral over a zone is exactly
// eps/2, so the identity segment is matched without any offset and rho
// is C^2 across the junctions.
class CutoffProfile {
public:
    enum class Side { Both, LeftOnly, RightOnly, None };

    CutoffProfile(double a, double b, double eps, Side side = Side::Both)
        : a_(a), b_(b), eps_(eps), side_(side) {
        if (!(b > a)) throw DomainError("CutoffProfile: need b > a");
        if (!(eps > 0.0)) throw DomainError("CutoffProfile: need eps > 0");
        if (!(eps < (b - a) / 2.0)) {
            throw DomainError("CutoffProfile: eps=" + format_double(eps) +
                              " too large for interval of width " + format_double(b - a) +
                              " (need eps < (b-a)/2)");
        }
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double eps() const { return eps_; }
    Side side() const { return side_; }

    double value(double t) const {
        if (left_active()) {
            if (t <= a_ - eps_ / 2.0) return a_;
            if (t < a_ + eps_ / 2.0) {
                const double s = (t - (a_ - eps_ / 2.0)) / eps_;
                return a_ + eps_ * smoothstep_integral(s);
            }
        }
        if (right_active()) {
            if (t >= b_ + eps_ / 2.0) return b_;
            if (t > b_ - eps_ / 2.0) {
                // Mirror image of the left transition.
                const double s = ((b_ + eps_ / 2.0) - t) / eps_;
                return b_ - eps_ * smoothstep_integral(s);
            }
        }
        return t;
    }

    double deriv(double t) const {
        if (left_active()) {
            if (t <= a_ - eps_ / 2.0) return 0.0;
            if (t < a_ + eps_ / 2.0) {
                return smoothstep((t - (a_ - eps_ / 2.0)) / eps_);
            }
        }
        if (right_active()) {
            if (t >= b_ + eps_ / 2.0) return 0.0;
            if (t > b_ - eps_ / 2.0) {
                return smoothstep(((b_ + eps_ / 2.0) - t) / eps_);
            }
        }
        return 1.0;
    }

    bool left_active() const { return side_ == Side::Both || side_ == Side::LeftOnly; }
    bool right_active() const { return side_ == Side::Both || side_ == Side::RightOnly; }

private:
    double a_, b_, eps_;
    Side side_;
};

inline CutoffProfile make_cutoff(double a, double b, double eps,
                                 CutoffProfile::Side side = CutoffProfile::Side::Both) {
    return CutoffProfile(a, b, eps, side);
}

} // namespace muband

#endif // MUBAND_CUTOFF_HPP
