#ifndef MUBAND_SMOOTHING_HPP
#define MUBAND_SMOOTHING_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "muband/cutoff.hpp"
#include "muband/errors.hpp"
#include "muband/model_space.hpp"
#include "muband/numeric.hpp"

namespace muband {

// Result of the four-point grid certificate run on a SmoothedPotential.
struct SmoothingCertificate {
    bool identity_zone_ok = false;     // h_hat == h on [a+eps, b-eps]
    bool clamp_zone_constant = false;  // h_hat constant near smoothed ends
    bool monotone_ok = false;          // h_hat' <= 0 everywhere
    bool curvature_ok = false;         // -n/(n-1) h_hat^2 - 2 h_hat' <= sigma
    double min_strict_margin = 0.0;    // min over samples with h_hat' = 0 of sigma - (...)
    int grid_points = 0;

    bool all_ok() const {
        return identity_zone_ok && clamp_zone_constant && monotone_ok && curvature_ok &&
               min_strict_margin > 0.0;
    }
};

// Potential h of a model space composed with a cutoff reparametrization,
// h_hat = h o rho on [a-eps, b+eps]. Where a side is not smoothed the
// domain is extended instead and h_hat = h there. Certified against the
// four smoothing properties at construction.
class SmoothedPotential {
public:
    using Side = CutoffProfile::Side;

    SmoothedPotential(ModelSpace model, double eps, Side side,
                      int grid_points = kDefaultGridPoints)
        : model_(std::move(model)),
          cutoff_(checked_cutoff(model_, eps, side)),
          side_(side),
          sigma_(model_.nominal_sigma()) {
        check_extension_feasible();
        certificate_ = run_certificate(grid_points);
        if (!certificate_.all_ok()) {
            throw CertificateError("smoothing certificate failed: " + describe(certificate_));
        }
    }

    const ModelSpace& model() const { return model_; }
    const CutoffProfile& cutoff() const { return cutoff_; }
    Side side() const { return side_; }
    double sigma() const { return sigma_; }
    double eps() const { return cutoff_.eps(); }
    double domain_min() const { return model_.domain_min() - eps(); }
    double domain_max() const { return model_.domain_max() + eps(); }
    const SmoothingCertificate& certificate() const { return certificate_; }

    double value(double t) const {
        check_domain(t);
        return model_.potential_extended(cutoff_.value(t));
    }

    double deriv(double t) const {
        check_domain(t);
        const double rp = cutoff_.deriv(t);
        if (rp == 0.0) return 0.0;
        return model_.potential_deriv_extended(cutoff_.value(t)) * rp;
    }

    // Values at the closures of the two ends of the extended domain;
    // these are the junction/boundary values of a glued potential.
    double left_value() const { return value(domain_min()); }
    double right_value() const { return value(domain_max()); }

private:
    static CutoffProfile checked_cutoff(const ModelSpace& ms, double eps, Side side) {
        const double a = ms.domain_min();
        const double b = ms.domain_max();
        if (!(eps > 0.0) || !(eps < (b - a) / 2.0)) {
            throw CertificateError("smooth_potential: eps=" + format_double(eps) +
                                   " outside (0, (b-a)/2) for width " + format_double(b - a));
        }
        return CutoffProfile(a, b, eps, side);
    }

    void check_extension_feasible() const {
        const auto& w = model_.warping();
        if (!cutoff_.left_active() && !(domain_min() > w.family_min())) {
            throw DomainError("smooth_potential: left extension to " + format_double(domain_min()) +
                              " leaves the warping family domain");
        }
        if (!cutoff_.right_active() && !(domain_max() < w.family_max())) {
            throw DomainError("smooth_potential: right extension to " + format_double(domain_max()) +
                              " leaves the warping family domain");
        }
    }

    void check_domain(double t) const {
        if (!(t >= domain_min() && t <= domain_max())) {
            throw DomainError("SmoothedPotential: t=" + format_double(t) +
                              " outside [" + format_double(domain_min()) + ", " +
                              format_double(domain_max()) + "]");
        }
    }

    SmoothingCertificate run_certificate(int grid_points) const {
        SmoothingCertificate cert;
        cert.grid_points = grid_points;
        const double a = model_.domain_min();
        const double b = model_.domain_max();
        const double e = eps();
        const double tol_eq = 1e-9 * (1.0 + std::fabs(sigma_));

        cert.identity_zone_ok = true;
        cert.clamp_zone_constant = true;
        cert.monotone_ok = true;
        cert.curvature_ok = true;
        cert.min_strict_margin = std::numeric_limits<double>::infinity();

        bool saw_flat_sample = false;
        for (double t : uniform_grid(domain_min(), domain_max(), grid_points)) {
            const double h = value(t);
            const double hp = deriv(t);

            if (t >= a + e && t <= b - e) {
                if (std::fabs(h - model_.potential_extended(t)) > 1e-12 * (1.0 + std::fabs(h))) {
                    cert.identity_zone_ok = false;
                }
            }
            if (cutoff_.left_active() && t <= a - 0.75 * e) {
                if (h != value(domain_min())) cert.clamp_zone_constant = false;
            }
            if (cutoff_.right_active() && t >= b + 0.75 * e) {
                if (h != value(domain_max())) cert.clamp_zone_constant = false;
            }
            if (hp > 0.0) cert.monotone_ok = false;

            const double rhs = -(static_cast<double>(model_.dim()) / (model_.dim() - 1)) * h * h -
                               2.0 * hp;
            if (rhs > sigma_ + tol_eq) cert.curvature_ok = false;
            if (hp == 0.0 && (cutoff_.left_active() || cutoff_.right_active())) {
                // Flat samples only occur in clamp zones; the margin there is
                // sigma - rhs = 2 |h'(rho(t))| and must stay strictly positive.
                saw_flat_sample = true;
                cert.min_strict_margin = std::min(cert.min_strict_margin, sigma_ - rhs);
            }
        }
        if (!saw_flat_sample) {
            // One-sided extensions with no clamp zone sampled: vacuous, use
            // a positive sentinel so all_ok() reflects the other properties.
            cert.min_strict_margin =
                (cutoff_.left_active() || cutoff_.right_active()) ? 0.0 : 1.0;
        }
        return cert;
    }

    static std::string describe(const SmoothingCertificate& c) {
        std::string out;
        if (!c.identity_zone_ok) out += "[identity zone mismatch]";
        if (!c.clamp_zone_constant) out += "[clamp zone not constant]";
        if (!c.monotone_ok) out += "[h_hat' > 0 somewhere]";
        if (!c.curvature_ok) out += "[curvature bound exceeded]";
        if (!(c.min_strict_margin > 0.0)) out += "[strictness margin vanished]";
        return out.empty() ? "ok" : out;
    }

    ModelSpace model_;
    CutoffProfile cutoff_;
    Side side_;
    double sigma_;
    SmoothingCertificate certificate_;
};

inline SmoothedPotential smooth_potential(const ModelSpace& ms, double eps,
                                          CutoffProfile::Side side = CutoffProfile::Side::Both,
                                          int grid_points = kDefaultGridPoints) {
    return SmoothedPotential(ms, eps, side, grid_points);
}

} // namespace muband

#endif // MUBAND_SMOOTHING_HPP
