#ifndef MUBAND_COMPARISON_HPP
#define MUBAND_COMPARISON_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "muband/assembly.hpp"
#include "muband/errors.hpp"
#include "muband/model_space.hpp"
#include "muband/width_bounds.hpp"

namespace muband {

// Emitted when every measured width strictly exceeds its model width:
// the glued potential together with a positive condition certificate.
// The certificate covers the analytic side only; the topological
// separation property of the band is declared input, never verified.
struct ContradictionCertificate {
    double eps = 0.0;
    ConditionCertificate conditions;
    AssembledPotential potential;
    std::vector<std::pair<double, double>> width_pairs;  // (measured, model) per segment
};

struct ComparisonVerdict {
    // 1-based index of the first segment whose measured width is <= the
    // model width (ties count), when one exists.
    std::optional<int> satisfied_index;
    std::optional<ContradictionCertificate> contradiction;

    bool has_contradiction() const { return contradiction.has_value(); }
};

inline constexpr double kHypothesisTol = 1e-10;

// Checks the three comparison hypotheses on declared band data and
// either reports the first segment satisfying the width conclusion or
// runs the full assembly pipeline to produce a contradiction
// certificate.
inline ComparisonVerdict evaluate_partitioned(const PartitionedBandSpec& spec,
                                              const std::vector<ModelSpace>& models,
                                              double eps = 0.0,
                                              int grid_points = kDefaultGridPoints) {
    spec.validate();
    if (models.size() != spec.segments.size()) {
        throw DomainError("evaluate_partitioned: expected " +
                          std::to_string(spec.segments.size()) + " model spaces, got " +
                          std::to_string(models.size()));
    }

    // Scalar curvature lower bounds must dominate the model values.
    for (std::size_t j = 0; j < models.size(); ++j) {
        const double sigma = models[j].nominal_sigma();
        const double tol = kHypothesisTol * (1.0 + std::fabs(sigma));
        if (!(spec.segments[j].scal_lower >= sigma - tol)) {
            throw HypothesisError("scalar-curvature bound violated on segment " +
                                  std::to_string(j + 1) + ": declared " +
                                  format_double(spec.segments[j].scal_lower) + " < model value " +
                                  format_double(sigma));
        }
    }

    // Boundary mean curvatures must dominate the outer model values.
    {
        const double lower_model = models.front().boundary_mean_curvatures().first;
        const double upper_model = models.back().boundary_mean_curvatures().second;
        const double tol_lo = kHypothesisTol * (1.0 + std::fabs(lower_model));
        const double tol_hi = kHypothesisTol * (1.0 + std::fabs(upper_model));
        if (!(spec.mean_curv_minus >= lower_model - tol_lo)) {
            throw HypothesisError("boundary mean-curvature bound violated at the lower boundary: declared " +
                                  format_double(spec.mean_curv_minus) + " < model value " +
                                  format_double(lower_model));
        }
        if (!(spec.mean_curv_plus >= upper_model - tol_hi)) {
            throw HypothesisError("boundary mean-curvature bound violated at the upper boundary: declared " +
                                  format_double(spec.mean_curv_plus) + " < model value " +
                                  format_double(upper_model));
        }
    }

    // Mean curvatures must match pairwise across interior junctions,
    // equivalently the model potentials agree there.
    for (std::size_t j = 0; j + 1 < models.size(); ++j) {
        const double left = models[j].potential(models[j].domain_max());
        const double right = models[j + 1].potential(models[j + 1].domain_min());
        if (std::fabs(left - right) > kHypothesisTol * (1.0 + std::fabs(left))) {
            throw HypothesisError("mean-curvature matching violated at junction " +
                                  std::to_string(j + 1) + ": " + format_double(left) + " vs " +
                                  format_double(right));
        }
    }

    ComparisonVerdict verdict;
    for (std::size_t j = 0; j < models.size(); ++j) {
        if (spec.segments[j].width <= models[j].width()) {
            verdict.satisfied_index = static_cast<int>(j) + 1;
            return verdict;
        }
    }

    // Every measured width strictly exceeds its model width: build the
    // glued potential and certify the interior and barrier margins.
    const double used_eps = eps > 0.0 ? eps : choose_epsilon(spec, models, grid_points);
    AssembledPotential h = assemble(spec, models, used_eps, grid_points);
    ConditionCertificate cert = verify_conditions(h, spec, grid_points);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(models.size());
    for (std::size_t j = 0; j < models.size(); ++j) {
        pairs.emplace_back(spec.segments[j].width, models[j].width());
    }
    verdict.contradiction.emplace(
        ContradictionCertificate{used_eps, cert, std::move(h), std::move(pairs)});
    return verdict;
}

} // namespace muband

#endif // MUBAND_COMPARISON_HPP
