#ifndef MUBAND_MODEL_SPACE_HPP
#define MUBAND_MODEL_SPACE_HPP

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "muband/errors.hpp"
#include "muband/numeric.hpp"
#include "muband/spline.hpp"

namespace muband {

enum class WarpingFamily { Spherical, Cone, Hyperbolic, Custom };

inline std::string family_name(WarpingFamily f) {
    switch (f) {
        case WarpingFamily::Spherical: return "spherical";
        case WarpingFamily::Cone: return "cone";
        case WarpingFamily::Hyperbolic: return "hyperbolic";
        case WarpingFamily::Custom: return "custom";
    }
    return "?";
}

// Scalar-flat fiber descriptor. Only its volume enters any formula; all
// energies are reported per unit fiber volume.
struct FiberTag {
    enum class Kind { FlatTorus, Abstract };
    Kind kind = Kind::FlatTorus;
    double volume = 1.0;
};

// A positive warping profile t -> phi(t) on a closed interval, together
// with the dimension n that fixes the family exponent 2/n. Strict
// log-concavity is part of the contract: analytic families satisfy it on
// their whole domain, custom samples are certified at construction.
class WarpingFunction {
public:
    static WarpingFunction spherical(int n, double kappa, double a, double b) {
        require_dim(n);
        if (!(kappa > 0.0)) throw DomainError("spherical warping: kappa must be > 0");
        if (!(b > a)) throw DomainError("spherical warping: degenerate interval (width 0)");
        const double limit = kPi / (std::sqrt(kappa) * n);
        if (!(a > -limit && b < limit)) {
            throw DomainError("spherical warping: interval must stay strictly inside (-pi/(sqrt(kappa) n), pi/(sqrt(kappa) n))");
        }
        WarpingFunction w(WarpingFamily::Spherical, n, a, b);
        w.kappa_ = kappa;
        return w;
    }

    static WarpingFunction cone(int n, double a, double b) {
        require_dim(n);
        if (!(a > 0.0)) throw DomainError("cone warping: lower endpoint must be > 0");
        if (!(b > a)) throw DomainError("cone warping: degenerate interval (width 0)");
        return WarpingFunction(WarpingFamily::Cone, n, a, b);
    }

    static WarpingFunction hyperbolic(int n, double sigma, double a, double b) {
        require_dim(n);
        if (!(sigma > 0.0)) throw DomainError("hyperbolic warping: sigma must be > 0");
        if (!(a > 0.0)) throw DomainError("hyperbolic warping: lower endpoint must be > 0");
        if (!(b > a)) throw DomainError("hyperbolic warping: degenerate interval (width 0)");
        WarpingFunction w(WarpingFamily::Hyperbolic, n, a, b);
        w.sigma_ = sigma;
        return w;
    }

    // Custom-sampled warping. Derivatives come from a natural cubic
    // spline; strict log-concavity is certified on sample midpoints with
    // margin 1e-10.
    static WarpingFunction custom(int n, std::vector<double> ts, std::vector<double> phis) {
        require_dim(n);
        std::vector<double> midpoints;
        midpoints.reserve(ts.size());
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            midpoints.push_back(0.5 * (ts[i] + ts[i + 1]));
        }
        auto spline = std::make_shared<CubicSpline>(std::move(ts), std::move(phis));
        WarpingFunction w(WarpingFamily::Custom, n, spline->domain_min(), spline->domain_max());
        w.spline_ = spline;
        w.certify_custom(midpoints);
        return w;
    }

    WarpingFamily family() const { return family_; }
    int dim() const { return n_; }
    double domain_min() const { return a_; }
    double domain_max() const { return b_; }
    double kappa() const { return kappa_; }
    double sigma_param() const { return sigma_; }
    bool is_reflected() const { return reflected_; }

    // Open interval on which the family formula itself is defined; the
    // band interval [a, b] and any smoothing extension must stay inside.
    double family_min() const {
        const double base = base_family_min();
        return reflected_ ? -base_family_max() : base;
    }
    double family_max() const {
        const double base = base_family_max();
        return reflected_ ? -base_family_min() : base;
    }

    double phi(double t) const {
        check_family_domain(t);
        const double u = reflected_ ? -t : t;
        switch (family_) {
            case WarpingFamily::Spherical:
                return std::pow(std::cos(spherical_rate() * u), 2.0 / n_);
            case WarpingFamily::Cone:
                return std::pow(u, 2.0 / n_);
            case WarpingFamily::Hyperbolic:
                return std::pow(std::sinh(hyperbolic_rate() * u), 2.0 / n_);
            case WarpingFamily::Custom:
                return spline_->value(u);
        }
        return 0.0;
    }

    double phi_deriv(double t) const {
        check_family_domain(t);
        const double u = reflected_ ? -t : t;
        const double sign = reflected_ ? -1.0 : 1.0;
        if (family_ == WarpingFamily::Custom) return sign * spline_->deriv(u);
        // phi' = phi * (log phi)'
        return sign * phi_at(u) * log_deriv_at(u);
    }

    double phi_second(double t) const {
        check_family_domain(t);
        const double u = reflected_ ? -t : t;
        if (family_ == WarpingFamily::Custom) return spline_->second_deriv(u);
        // phi'' = phi * ((log phi)'^2 + (log phi)'')
        const double l1 = log_deriv_at(u);
        return phi_at(u) * (l1 * l1 + log_second_at(u));
    }

    // (log phi)' = phi'/phi; the potential is (n-1) times this value.
    double log_deriv(double t) const {
        check_family_domain(t);
        const double u = reflected_ ? -t : t;
        const double sign = reflected_ ? -1.0 : 1.0;
        if (family_ == WarpingFamily::Custom) return sign * spline_->deriv(u) / spline_->value(u);
        return sign * log_deriv_at(u);
    }

    // (phi'/phi)', strictly negative on the domain for a valid warping.
    double log_second(double t) const {
        check_family_domain(t);
        const double u = reflected_ ? -t : t;
        if (family_ == WarpingFamily::Custom) {
            const double p = spline_->value(u);
            const double dp = spline_->deriv(u);
            const double d2p = spline_->second_deriv(u);
            return (d2p * p - dp * dp) / (p * p);
        }
        return log_second_at(u);
    }

    WarpingFunction reflected() const {
        WarpingFunction w(*this);
        w.reflected_ = !reflected_;
        std::swap(w.a_, w.b_);
        w.a_ = -w.a_;
        w.b_ = -w.b_;
        return w;
    }

private:
    WarpingFunction(WarpingFamily f, int n, double a, double b)
        : family_(f), n_(n), a_(a), b_(b) {}

    static void require_dim(int n) {
        if (n < 2 || n > 7) throw DomainError("warping: dimension n must satisfy 2 <= n <= 7");
    }

    double spherical_rate() const { return std::sqrt(kappa_) * n_ / 2.0; }
    double hyperbolic_rate() const { return std::sqrt(sigma_ * n_) / (2.0 * std::sqrt(n_ - 1.0)); }

    double base_family_min() const {
        switch (family_) {
            case WarpingFamily::Spherical: return -kPi / (std::sqrt(kappa_) * n_);
            case WarpingFamily::Cone:
            case WarpingFamily::Hyperbolic: return 0.0;
            case WarpingFamily::Custom: return spline_->domain_min();
        }
        return 0.0;
    }

    double base_family_max() const {
        switch (family_) {
            case WarpingFamily::Spherical: return kPi / (std::sqrt(kappa_) * n_);
            case WarpingFamily::Cone:
            case WarpingFamily::Hyperbolic: return std::numeric_limits<double>::infinity();
            case WarpingFamily::Custom: return spline_->domain_max();
        }
        return 0.0;
    }

    void check_family_domain(double t) const {
        if (!(t >= family_min() && t <= family_max()) ||
            ((family_ == WarpingFamily::Spherical) && !(t > family_min() && t < family_max())) ||
            ((family_ == WarpingFamily::Cone || family_ == WarpingFamily::Hyperbolic) &&
             (reflected_ ? !(t < 0.0) : !(t > 0.0)))) {
            throw DomainError("warping: evaluation at t=" + format_double(t) +
                              " outside the " + family_name(family_) + " family domain");
        }
    }

    // Unreflected evaluators at u in the base coordinate.
    double phi_at(double u) const {
        switch (family_) {
            case WarpingFamily::Spherical: return std::pow(std::cos(spherical_rate() * u), 2.0 / n_);
            case WarpingFamily::Cone: return std::pow(u, 2.0 / n_);
            case WarpingFamily::Hyperbolic: return std::pow(std::sinh(hyperbolic_rate() * u), 2.0 / n_);
            case WarpingFamily::Custom: return spline_->value(u);
        }
        return 0.0;
    }

    double log_deriv_at(double u) const {
        switch (family_) {
            case WarpingFamily::Spherical: return -spherical_rate() * (2.0 / n_) * std::tan(spherical_rate() * u);
            case WarpingFamily::Cone: return 2.0 / (n_ * u);
            case WarpingFamily::Hyperbolic: return hyperbolic_rate() * (2.0 / n_) / std::tanh(hyperbolic_rate() * u);
            case WarpingFamily::Custom: return spline_->deriv(u) / spline_->value(u);
        }
        return 0.0;
    }

    double log_second_at(double u) const {
        switch (family_) {
            case WarpingFamily::Spherical: {
                const double r = spherical_rate();
                const double c = std::cos(r * u);
                return -r * r * (2.0 / n_) / (c * c);
            }
            case WarpingFamily::Cone:
                return -2.0 / (n_ * u * u);
            case WarpingFamily::Hyperbolic: {
                const double r = hyperbolic_rate();
                const double s = std::sinh(r * u);
                return -r * r * (2.0 / n_) / (s * s);
            }
            case WarpingFamily::Custom: {
                const double p = spline_->value(u);
                const double dp = spline_->deriv(u);
                const double d2p = spline_->second_deriv(u);
                return (d2p * p - dp * dp) / (p * p);
            }
        }
        return 0.0;
    }

    void certify_custom(const std::vector<double>& midpoints) {
        // Positivity over the domain, strict log-concavity at the sample
        // midpoints.
        for (double t : uniform_grid(a_, b_, 512)) {
            if (!(spline_->value(t) > 0.0)) {
                throw CertificateError("custom warping: phi must be positive on its domain");
            }
        }
        for (double mid : midpoints) {
            if (!(log_second(mid) < -1e-10)) {
                throw CertificateError("custom warping: strict log-concavity fails near t=" +
                                       format_double(mid));
            }
        }
    }

    WarpingFamily family_;
    int n_;
    double a_, b_;
    double kappa_ = 0.0;
    double sigma_ = 0.0;
    bool reflected_ = false;
    std::shared_ptr<const CubicSpline> spline_;
};

// Warped product N x [a,b] with metric phi^2 g_N + dt^2 over a closed
// scalar-flat fiber. Immutable after construction.
class ModelSpace {
public:
    ModelSpace(int n, WarpingFunction warping, FiberTag fiber = {})
        : n_(n), warping_(std::move(warping)), fiber_(fiber) {
        if (n != warping_.dim()) {
            throw DomainError("ModelSpace: dimension does not match its warping function");
        }
    }

    int dim() const { return n_; }
    const WarpingFunction& warping() const { return warping_; }
    const FiberTag& fiber() const { return fiber_; }
    double domain_min() const { return warping_.domain_min(); }
    double domain_max() const { return warping_.domain_max(); }
    double width() const { return domain_max() - domain_min(); }

    // Slice potential h(t) = (n-1) phi'(t)/phi(t); strictly decreasing.
    double potential(double t) const {
        check_band_domain(t);
        return potential_extended(t);
    }

    double potential_deriv(double t) const {
        check_band_domain(t);
        return potential_deriv_extended(t);
    }

    // Same evaluators without the [a,b] restriction; valid anywhere the
    // family formula is, used when a smoothing step extends the domain.
    double potential_extended(double t) const { return (n_ - 1) * warping_.log_deriv(t); }

    double potential_deriv_extended(double t) const {
        if (warping_.family() == WarpingFamily::Custom) {
            return numeric_potential_deriv(t);
        }
        return (n_ - 1) * warping_.log_second(t);
    }

    // Right-hand side of the warped-product curvature identity,
    // -n/(n-1) h^2 - 2 h'. Constant for the named families.
    double scalar_curvature(double t) const {
        check_band_domain(t);
        const double h = potential_extended(t);
        const double hp = potential_deriv_extended(t);
        return -(static_cast<double>(n_) / (n_ - 1)) * h * h - 2.0 * hp;
    }

    // Closed-form constant value of the scalar curvature for the named
    // families; grid mean for custom warpings.
    double nominal_sigma() const {
        switch (warping_.family()) {
            case WarpingFamily::Spherical: return warping_.kappa() * n_ * (n_ - 1);
            case WarpingFamily::Cone: return 0.0;
            case WarpingFamily::Hyperbolic: return -warping_.sigma_param();
            case WarpingFamily::Custom: {
                const auto grid = uniform_grid(domain_min(), domain_max(), 101);
                double acc = 0.0;
                for (double t : grid) acc += scalar_curvature(t);
                return acc / static_cast<double>(grid.size());
            }
        }
        return 0.0;
    }

    // Mean curvatures of the two boundary slices with respect to the
    // interior unit normal (unit ball boundary in 3-space has value 2):
    // H(lower) = -h(a), H(upper) = h(b).
    std::pair<double, double> boundary_mean_curvatures() const {
        return {-potential_extended(domain_min()), potential_extended(domain_max())};
    }

    ModelSpace reflect() const { return ModelSpace(n_, warping_.reflected(), fiber_); }

private:
    void check_band_domain(double t) const {
        if (!(t >= domain_min() && t <= domain_max())) {
            throw DomainError("ModelSpace: t=" + format_double(t) + " outside band domain [" +
                              format_double(domain_min()) + ", " + format_double(domain_max()) + "]");
        }
    }

    // Central difference with a step adapted to position and domain; the
    // sampled-warping path has no exact derivative for h.
    double numeric_potential_deriv(double t) const {
        double step = 6e-6 * std::max(1.0, std::fabs(t));
        const double lo = warping_.family_min();
        const double hi = warping_.family_max();
        step = std::min(step, 0.45 * std::min(t - lo, hi - t));
        if (!(step > 0.0)) {
            throw DomainError("ModelSpace: cannot differentiate at the edge of a sampled domain");
        }
        return (potential_extended(t + step) - potential_extended(t - step)) / (2.0 * step);
    }

    int n_;
    WarpingFunction warping_;
    FiberTag fiber_;
};

inline ModelSpace make_spherical(int n, double kappa, double a, double b, FiberTag fiber = {}) {
    return ModelSpace(n, WarpingFunction::spherical(n, kappa, a, b), fiber);
}

inline ModelSpace make_cone(int n, double t_minus, double b, FiberTag fiber = {}) {
    return ModelSpace(n, WarpingFunction::cone(n, t_minus, b), fiber);
}

inline ModelSpace make_hyperbolic(int n, double sigma, double t_minus, double b, FiberTag fiber = {}) {
    return ModelSpace(n, WarpingFunction::hyperbolic(n, sigma, t_minus, b), fiber);
}

inline ModelSpace make_custom(int n, std::vector<double> ts, std::vector<double> phis,
                              FiberTag fiber = {}) {
    return ModelSpace(n, WarpingFunction::custom(n, std::move(ts), std::move(phis)), fiber);
}

inline ModelSpace reflect(const ModelSpace& ms) { return ms.reflect(); }

inline double width_of(const ModelSpace& ms) { return ms.width(); }

} // namespace muband

#endif // MUBAND_MODEL_SPACE_HPP
