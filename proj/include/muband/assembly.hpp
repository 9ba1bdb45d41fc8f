#ifndef MUBAND_ASSEMBLY_HPP
#define MUBAND_ASSEMBLY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muband/band_map.hpp"
#include "muband/errors.hpp"
#include "muband/model_space.hpp"
#include "muband/numeric.hpp"
#include "muband/smoothing.hpp"
#include "muband/width_bounds.hpp"

namespace muband {

// Declared data of a partitioned band: measured segment widths, scalar
// curvature lower bounds per segment, and mean-curvature lower bounds of
// the two boundary pieces. Everything here is input data, not something
// the library can verify about an actual manifold.
struct PartitionedBandSpec {
    struct Segment {
        double width = 0.0;       // measured width of V_j (length)
        double scal_lower = 0.0;  // declared lower bound for scal on V_j
    };

    int n = 0;
    std::vector<Segment> segments;  // k+1 entries, ordered lower to upper
    double mean_curv_minus = 0.0;   // lower bound for H of the lower boundary
    double mean_curv_plus = 0.0;    // lower bound for H of the upper boundary

    int k() const { return static_cast<int>(segments.size()) - 1; }

    void validate() const {
        if (n < 2 || n > 7) throw DomainError("PartitionedBandSpec: need 2 <= n <= 7");
        if (segments.empty()) throw DomainError("PartitionedBandSpec: need at least one segment");
        for (const auto& s : segments) {
            if (!(s.width > 0.0)) throw DomainError("PartitionedBandSpec: widths must be > 0");
        }
    }
};

enum class CapFamily { Cone, Hyperbolic };

// Output of the cap/middle matching step: the inner cut t_inner of the cap
// model, the shifts (delta1 on the spherical side, delta2 past ell on the
// cap side) and the matched endpoint ell + delta2.
struct SegmentMatch {
    double ell = 0.0;          // limiting endpoint as delta1 -> 0
    double t_inner = 0.0;      // inner endpoint of the cap domain (> 0)
    double delta1 = 0.0;
    double delta2 = 0.0;
    double matched_end = 0.0;  // ell + delta2
};

namespace detail {

// Potential of the unreflected cap family at t > 0.
inline double cap_potential(int n, CapFamily fam, double sigma, double t) {
    if (fam == CapFamily::Cone) return 2.0 * (n - 1) / (static_cast<double>(n) * t);
    const double pref = std::sqrt(sigma * (n - 1) / n);
    const double rate = std::sqrt(sigma * n) / (2.0 * std::sqrt(n - 1.0));
    return pref / std::tanh(rate * t);
}

inline double cap_potential_inf(int n, CapFamily fam, double sigma) {
    return fam == CapFamily::Cone ? 0.0 : std::sqrt(sigma * (n - 1) / n);
}

} // namespace detail

inline constexpr double kInnerCutFloor = 1e-8;  // keeps caps away from their t = 0 singularity
inline constexpr double kJunctionMatchTol = 1e-10;

// Matches a scalar-flat or hyperbolic cap against a spherical middle
// segment of width d: picks an inner cut t_inner compatible with the
// declared boundary mean-curvature bound, then solves
//     h_sphere((-d + delta1)/2) = h_cap(ell + delta2)
// for the matched endpoint by bracket-scanned bisection. When delta1 is
// not supplied, it is halved from d/64 until delta2 < t_inner, which
// keeps the cap width strictly below ell.
inline SegmentMatch match_segments(int n, double kappa, double d, CapFamily fam, double sigma,
                                   double mean_curv_bound, double delta1 = -1.0,
                                   const RootOptions& opt = {}) {
    detail::check_middle_width(n, kappa, d);
    SegmentMatch out;
    if (fam == CapFamily::Cone) {
        out.ell = ell_nonneg(n, kappa, d).value;
    } else {
        out.ell = ell_negative(n, kappa, sigma, d, opt).value;
    }

    const auto h_cap = [&](double t) { return detail::cap_potential(n, fam, sigma, t); };

    // Junction values must match to well below 1e-12, so the matching
    // solves run the bracket down to machine precision.
    RootOptions tight = opt;
    tight.rel_tol = 1e-16;

    // Inner cut: the largest t with -h_cap(t) <= mean_curv_bound, clamped
    // to a positive floor. If the bound is above the family's asymptotic
    // value the constraint is slack for every t and ell/2 is used.
    const double tail = detail::cap_potential_inf(n, fam, sigma);
    const auto g = [&](double t) { return h_cap(t) + mean_curv_bound; };
    if (-mean_curv_bound <= tail) {
        out.t_inner = 0.5 * out.ell;
    } else if (g(kInnerCutFloor) <= 0.0) {
        // The bound would need a cut below the singularity guard.
        out.t_inner = kInnerCutFloor;
    } else {
        double hi = std::max({out.ell, d, 1.0});
        int expansions = 0;
        while (g(hi) > 0.0 && expansions++ < 64) hi *= 2.0;
        out.t_inner = std::max(kInnerCutFloor, scan_and_bisect(g, kInnerCutFloor, hi, tight));
    }

    const auto solve_end = [&](double del1) -> double {
        const double target =
            std::sqrt(kappa) * (n - 1) * std::tan(0.25 * std::sqrt(kappa) * n * (d - del1));
        if (!(target > detail::cap_potential_inf(n, fam, sigma))) {
            throw NoRootError("match_segments: matched potential value " + format_double(target) +
                              " diverged below the cap family range (d too close to its limit)");
        }
        const auto f = [&](double t) { return h_cap(t) - target; };
        double hi = 4.0 * out.ell;
        int expansions = 0;
        while (f(hi) > 0.0 && expansions++ < 64) hi *= 2.0;
        return scan_and_bisect(f, kInnerCutFloor, hi, tight);
    };

    if (delta1 > 0.0) {
        out.delta1 = delta1;
    } else {
        out.delta1 = d / 64.0;
        for (int tries = 0; tries < 60; ++tries) {
            bool ok = true;
            if (fam == CapFamily::Hyperbolic) {
                const double shrunk = ell_negative_threshold(n, kappa, d - 2.0 * out.delta1);
                ok = sigma < shrunk;
            }
            if (ok) {
                const double end = solve_end(out.delta1);
                if (end - out.ell < out.t_inner) break;
            }
            out.delta1 *= 0.5;
        }
    }
    if (!(out.delta1 > 0.0 && out.delta1 < d)) {
        throw DomainError("match_segments: no feasible delta1 found");
    }
    out.matched_end = solve_end(out.delta1);
    out.delta2 = out.matched_end - out.ell;
    if (!(out.delta2 > 0.0)) {
        throw NoRootError("match_segments: matched endpoint did not move past ell (delta1 = " +
                          format_double(out.delta1) + ")");
    }
    if (!(out.t_inner < out.matched_end)) {
        throw NoRootError("match_segments: matched endpoint " + format_double(out.matched_end) +
                          " collapsed below the inner cut " + format_double(out.t_inner) +
                          " (d too close to its admissible ceiling)");
    }
    if (!(out.delta2 < out.t_inner)) {
        throw WidthError("match_segments: cap width " + format_double(out.matched_end - out.t_inner) +
                         " is not strictly below ell = " + format_double(out.ell) +
                         " (delta2 >= t_inner)");
    }
    return out;
}

// The three-model construction behind both cap corollaries: a cap below,
// a spherical middle, and a reflected cap above, with mean curvatures
// matched pairwise across the junctions.
struct ThreeSegmentPlan {
    std::vector<ModelSpace> models;  // lower cap, sphere, upper cap
    SegmentMatch lower, upper;
};

inline ThreeSegmentPlan plan_three_segment_comparison(int n, double kappa, double d, CapFamily fam,
                                                      double sigma, double mean_curv_minus,
                                                      double mean_curv_plus, double delta1 = -1.0,
                                                      double delta3 = -1.0) {
    ThreeSegmentPlan plan;
    plan.lower = match_segments(n, kappa, d, fam, sigma, mean_curv_minus, delta1);
    plan.upper = match_segments(n, kappa, d, fam, sigma, mean_curv_plus, delta3);

    auto make_cap = [&](double lo, double hi) {
        return fam == CapFamily::Cone ? make_cone(n, lo, hi) : make_hyperbolic(n, sigma, lo, hi);
    };
    plan.models.push_back(make_cap(plan.lower.t_inner, plan.lower.matched_end));
    plan.models.push_back(make_spherical(n, kappa, 0.5 * (-d + plan.lower.delta1),
                                         0.5 * (d - plan.upper.delta1)));
    plan.models.push_back(make_cap(plan.upper.t_inner, plan.upper.matched_end).reflect());
    return plan;
}

// One glued piece: a smoothed model potential pulled back through an
// affine band coordinate, occupying [x_begin, x_end] of the global band.
struct AssembledPiece {
    SmoothedPotential potential;
    BandCoordinate coordinate;
    double x_begin = 0.0;
    double x_end = 0.0;
};

// The glued potential h over the concatenated band coordinate. Non-
// increasing, smooth across junctions (both sides are constant there),
// with an exact chain-rule derivative per piece.
class AssembledPotential {
public:
    AssembledPotential(std::vector<AssembledPiece> pieces, double max_junction_mismatch)
        : pieces_(std::move(pieces)), max_junction_mismatch_(max_junction_mismatch) {}

    double domain_min() const { return pieces_.front().x_begin; }
    double domain_max() const { return pieces_.back().x_end; }
    std::size_t piece_count() const { return pieces_.size(); }
    const AssembledPiece& piece(std::size_t j) const { return pieces_[j]; }
    double max_junction_mismatch() const { return max_junction_mismatch_; }

    std::size_t segment_index(double x) const {
        if (!(x >= domain_min() && x <= domain_max())) {
            throw DomainError("AssembledPotential: x=" + format_double(x) + " outside [" +
                              format_double(domain_min()) + ", " + format_double(domain_max()) + "]");
        }
        std::size_t j = 0;
        while (j + 1 < pieces_.size() && x >= pieces_[j].x_end) ++j;
        return j;
    }

    double value(double x) const {
        const auto& p = pieces_[segment_index(x)];
        return p.potential.value(p.coordinate.value(local(p, x)));
    }

    // dh/dx, exact for the affine pieces: h_hat'(beta(x)) * slope.
    double deriv(double x) const {
        const auto& p = pieces_[segment_index(x)];
        return p.potential.deriv(p.coordinate.value(local(p, x))) * p.coordinate.lipschitz();
    }

    // |h_hat'(beta(x))| before the Lipschitz factor; an upper bound for
    // |dh/dx| that ignores the strict slope gain.
    double model_deriv_bound(double x) const {
        const auto& p = pieces_[segment_index(x)];
        return std::fabs(p.potential.deriv(p.coordinate.value(local(p, x))));
    }

private:
    static double local(const AssembledPiece& p, double x) {
        return std::min(std::max(x - p.x_begin, 0.0), p.coordinate.source_width());
    }

    std::vector<AssembledPiece> pieces_;
    double max_junction_mismatch_;
};

namespace detail {

inline CutoffProfile::Side side_for_segment(std::size_t j, std::size_t count) {
    if (count == 1) return CutoffProfile::Side::None;
    if (j == 0) return CutoffProfile::Side::RightOnly;
    if (j + 1 == count) return CutoffProfile::Side::LeftOnly;
    return CutoffProfile::Side::Both;
}

// Largest eps compatible with the cutoff preconditions, the strict width
// surpluses and the family-domain extensions at the outer ends.
inline double eps_ceiling(const PartitionedBandSpec& spec, const std::vector<ModelSpace>& models) {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < models.size(); ++j) {
        const double mw = models[j].width();
        cap = std::min(cap, 0.49 * mw);
        cap = std::min(cap, 0.45 * (spec.segments[j].width - mw));
    }
    const auto& first = models.front().warping();
    const auto& last = models.back().warping();
    cap = std::min(cap, 0.9 * (models.front().domain_min() - first.family_min()));
    if (std::isfinite(last.family_max())) {
        cap = std::min(cap, 0.9 * (last.family_max() - models.back().domain_max()));
    }
    return cap;
}

} // namespace detail

inline AssembledPotential assemble(const PartitionedBandSpec& spec,
                                   const std::vector<ModelSpace>& models, double eps,
                                   int grid_points = kDefaultGridPoints) {
    spec.validate();
    if (models.size() != spec.segments.size()) {
        throw DomainError("assemble: expected " + std::to_string(spec.segments.size()) +
                          " model spaces, got " + std::to_string(models.size()));
    }
    for (std::size_t j = 0; j < models.size(); ++j) {
        if (models[j].dim() != spec.n) throw DomainError("assemble: model dimension mismatch");
        if (!(spec.segments[j].width > models[j].width())) {
            throw WidthError("assemble: segment " + std::to_string(j + 1) + " width " +
                             format_double(spec.segments[j].width) +
                             " does not strictly exceed the model width " +
                             format_double(models[j].width()));
        }
    }
    if (!(eps > 0.0)) throw DomainError("assemble: need eps > 0");

    std::vector<AssembledPiece> pieces;
    pieces.reserve(models.size());
    double x = 0.0;
    for (std::size_t j = 0; j < models.size(); ++j) {
        SmoothedPotential pot(models[j], eps, detail::side_for_segment(j, models.size()),
                              grid_points);
        BandCoordinate beta(spec.segments[j].width, pot.domain_min(), pot.domain_max());
        const double x_end = x + spec.segments[j].width;
        pieces.push_back(AssembledPiece{std::move(pot), beta, x, x_end});
        x = x_end;
    }

    double max_mismatch = 0.0;
    for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
        const double left = pieces[j].potential.right_value();
        const double right = pieces[j + 1].potential.left_value();
        const double mismatch = std::fabs(left - right);
        max_mismatch = std::max(max_mismatch, mismatch);
        if (mismatch > kJunctionMatchTol) {
            throw MatchError("assemble: mean-curvature mismatch " + format_double(mismatch) +
                             " at junction " + std::to_string(j + 1) + " (left " +
                             format_double(left) + ", right " + format_double(right) + ")");
        }
    }
    return AssembledPotential(std::move(pieces), max_mismatch);
}

// Pointwise certificate of the interior condition
//   scal_lower + n/(n-1) h^2 - 2 |h'| > 0
// and of the two boundary barrier margins H(lower) + h and H(upper) - h.
struct ConditionCertificate {
    double min_interior_margin = 0.0;
    double argmin_x = 0.0;
    double boundary_margin_lower = 0.0;
    double boundary_margin_upper = 0.0;
    int grid_points = 0;

    bool positive() const {
        return min_interior_margin > 0.0 && boundary_margin_lower > 0.0 &&
               boundary_margin_upper > 0.0;
    }
};

// Callable form: h, dh/dx and the scalar-curvature lower bound as plain
// functions of the band coordinate.
inline ConditionCertificate verify_conditions(const std::function<double(double)>& h,
                                              const std::function<double(double)>& dh,
                                              const std::function<double(double)>& scal_lower,
                                              int n, double x_lo, double x_hi,
                                              double mean_curv_minus, double mean_curv_plus,
                                              int grid_points = kDefaultGridPoints) {
    ConditionCertificate cert;
    cert.grid_points = grid_points;
    cert.min_interior_margin = std::numeric_limits<double>::infinity();
    const double nn = static_cast<double>(n) / (n - 1);
    for (double x : uniform_grid(x_lo, x_hi, grid_points)) {
        const double hv = h(x);
        const double margin = scal_lower(x) + nn * hv * hv - 2.0 * std::fabs(dh(x));
        if (margin < cert.min_interior_margin) {
            cert.min_interior_margin = margin;
            cert.argmin_x = x;
        }
    }
    cert.boundary_margin_lower = mean_curv_minus + h(x_lo);
    cert.boundary_margin_upper = mean_curv_plus - h(x_hi);
    return cert;
}

inline ConditionCertificate verify_conditions(const AssembledPotential& h,
                                              const PartitionedBandSpec& spec,
                                              int grid_points = kDefaultGridPoints) {
    return verify_conditions(
        [&h](double x) { return h.value(x); }, [&h](double x) { return h.deriv(x); },
        [&h, &spec](double x) { return spec.segments[h.segment_index(x)].scal_lower; }, spec.n,
        h.domain_min(), h.domain_max(), spec.mean_curv_minus, spec.mean_curv_plus, grid_points);
}

// Default eps: start from min(0.05 * model width, feasibility ceiling)
// and halve until the condition certificate clears 1e-8 margins.
inline double choose_epsilon(const PartitionedBandSpec& spec, const std::vector<ModelSpace>& models,
                             int grid_points = kDefaultGridPoints) {
    spec.validate();
    double eps = detail::eps_ceiling(spec, models);
    for (const auto& m : models) eps = std::min(eps, 0.05 * m.width());
    if (!(eps > 0.0)) {
        throw WidthError("choose_epsilon: no positive eps satisfies the width surpluses");
    }
    for (int tries = 0; tries < 40; ++tries) {
        try {
            const auto h = assemble(spec, models, eps, grid_points);
            const auto cert = verify_conditions(h, spec, grid_points);
            if (cert.min_interior_margin >= 1e-8 && cert.boundary_margin_lower >= 1e-8 &&
                cert.boundary_margin_upper >= 1e-8) {
                return eps;
            }
        } catch (const MatchError&) {
            throw;  // junction mismatch will not improve with smaller eps
        } catch (const Error&) {
            // infeasible at this eps, try smaller
        }
        eps *= 0.5;
    }
    throw CertificateError("choose_epsilon: no eps with all margins >= 1e-8 found; the declared "
                           "band data admits no certified assembly");
}

} // namespace muband

#endif // MUBAND_ASSEMBLY_HPP
