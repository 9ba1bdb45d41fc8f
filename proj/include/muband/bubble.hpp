#ifndef MUBAND_BUBBLE_HPP
#define MUBAND_BUBBLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "muband/errors.hpp"
#include "muband/grid_band.hpp"
#include "muband/max_flow.hpp"
#include "muband/numeric.hpp"

namespace muband {

struct BarrierReport {
    bool ok = false;
    double margin_lower = 0.0;  // H(lower boundary) + h there, must be > 0
    double margin_upper = 0.0;  // H(upper boundary) - h there, must be > 0
};

struct StabilityCertificate {
    double b = 0.0;              // stability constant, >= 0
    bool positive = false;       // margin strictly positive (else b = 0)
    double min_margin = 0.0;     // min over the boundary of scal + n/(n-1) h^2 - 2|grad h|
    double psi_one_check = 0.0;  // same expression averaged (psi == 1 test function) / 2
    std::string method = "pointwise-min";
};

struct FirstVariationReport {
    double residual_max = 0.0;
    double residual_mean = 0.0;
    int samples = 0;
};

// Oriented boundary component of a discrete minimizer; the set lies on
// the left of the traversal direction, so left turns are positive
// curvature with respect to the inward normal.
struct BoundaryChain {
    bool closed = false;
    std::vector<std::array<double, 2>> vertices;            // unwrapped coordinates
    std::vector<std::pair<std::size_t, std::size_t>> faces; // (inside, outside) cell per segment
};

struct BubbleResult {
    DiscreteSet minimizer;
    double energy = 0.0;
    double perimeter = 0.0;
    double bulk = 0.0;  // integral of h over the minimizer
    // 1D slice data
    int slice_face = -1;
    double slice_t = 0.0;
    bool degenerate_family = false;
    bool discrete_convexity = false;
    // 2D data
    std::vector<BoundaryChain> boundary;
    long long energy_quantized = 0;
    double quantization_error_bound = 0.0;
    FirstVariationReport first_variation;
    StabilityCertificate stability;
};

// ---------------------------------------------------------------------
// Barriers
// ---------------------------------------------------------------------

inline BarrierReport check_barriers(const GridBand& grid) {
    BarrierReport rep;
    if (grid.mode() == GridBand::Mode::Warped1D) {
        const int last = grid.cell_count_1d();
        // Boundary slice mean curvatures w.r.t. the interior normal are
        // -(n-1)w'/w at the lower end and +(n-1)w'/w at the upper end.
        rep.margin_lower = grid.face_h(0) - grid.face_slice_mean_curv(0);
        rep.margin_upper = grid.face_slice_mean_curv(last) - grid.face_h(last);
    } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < grid.cell_count(); ++p) {
            if (grid.in_source_collar(p)) lo = std::min(lo, grid.mean_curv_minus() + grid.h_at(p));
            if (grid.in_sink_collar(p)) hi = std::min(hi, grid.mean_curv_plus() - grid.h_at(p));
        }
        rep.margin_lower = lo;
        rep.margin_upper = hi;
    }
    rep.ok = rep.margin_lower > 0.0 && rep.margin_upper > 0.0;
    return rep;
}

namespace detail {

// Solvers reject outright barrier violations; a zero margin is the flat
// boundary case where the minimizer family may touch a collar, which the
// degenerate/boundary handling downstream deals with. Strictness itself
// is reported by check_barriers.
inline void require_barriers(const GridBand& grid) {
    const BarrierReport rep = check_barriers(grid);
    if (rep.margin_lower < 0.0 || rep.margin_upper < 0.0) {
        throw BarrierError("barrier condition fails: lower margin " +
                           format_double(rep.margin_lower) + ", upper margin " +
                           format_double(rep.margin_upper));
    }
}

inline void require_admissible(const GridBand& grid, const DiscreteSet& set) {
    if (set.size() != grid.cell_count()) {
        throw AdmissibilityError("set size does not match the grid");
    }
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (grid.in_source_collar(p) && !set.contains(p)) {
            throw AdmissibilityError("set must contain the entire source collar");
        }
        if (grid.in_sink_collar(p) && set.contains(p)) {
            throw AdmissibilityError("set must be disjoint from the sink collar");
        }
    }
}

struct Pair2D {
    std::size_t a, b;
    double weight;
};

inline std::vector<Pair2D> neighbor_pairs(const GridBand& grid) {
    std::vector<Pair2D> pairs;
    const auto families = grid.pair_families();
    pairs.reserve(grid.cell_count() * families.size());
    for (int x = 0; x < grid.nx(); ++x) {
        for (int y = 0; y < grid.ny(); ++y) {
            for (const auto& f : families) {
                int ox, oy;
                if (grid.neighbor(x, y, f.dx, f.dy, ox, oy)) {
                    pairs.push_back({grid.cell_id(x, y), grid.cell_id(ox, oy), f.weight});
                }
            }
        }
    }
    return pairs;
}

} // namespace detail

// ---------------------------------------------------------------------
// Energy
// ---------------------------------------------------------------------

// Discrete functional: interior perimeter of the set minus the integral
// of h over it. Faces on the band boundary never contribute.
inline double energy(const GridBand& grid, const DiscreteSet& set) {
    detail::require_admissible(grid, set);
    if (grid.mode() == GridBand::Mode::Warped1D) {
        double perim = 0.0;
        for (int i = 1; i < grid.cell_count_1d(); ++i) {
            if (set.contains(static_cast<std::size_t>(i - 1)) !=
                set.contains(static_cast<std::size_t>(i))) {
                perim += std::pow(grid.face_w(i), grid.dim() - 1);
            }
        }
        double bulk = 0.0;
        for (int i = 0; i < grid.cell_count_1d(); ++i) {
            if (set.contains(static_cast<std::size_t>(i))) {
                bulk += grid.mid_h(i) * grid.mid_wpow(i) * grid.dt();
            }
        }
        return perim - bulk;
    }
    double perim = 0.0;
    for (const auto& pr : detail::neighbor_pairs(grid)) {
        if (set.contains(pr.a) != set.contains(pr.b)) perim += pr.weight;
    }
    double bulk = 0.0;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (set.contains(p)) bulk += grid.h_at(p) * grid.cell_volume();
    }
    return perim - bulk;
}

namespace detail {

// Integer-quantized instance shared by the exact solver and the
// enumeration oracle, so ties mean the same thing on both paths.
struct QuantizedModel {
    struct QPair {
        std::size_t a, b;
        long long w;
    };
    std::vector<QPair> pairs;
    std::vector<long long> mass;  // quantized h * cell volume per cell

    explicit QuantizedModel(const GridBand& grid) {
        for (const auto& pr : neighbor_pairs(grid)) {
            pairs.push_back({pr.a, pr.b, quantize_capacity(pr.weight)});
        }
        mass.resize(grid.cell_count());
        for (std::size_t p = 0; p < grid.cell_count(); ++p) {
            mass[p] = quantize_capacity(grid.h_at(p) * grid.cell_volume());
        }
    }

    long long eval(const DiscreteSet& set) const {
        long long perim = 0;
        for (const auto& pr : pairs) {
            if (set.contains(pr.a) != set.contains(pr.b)) perim += pr.w;
        }
        long long bulk = 0;
        for (std::size_t p = 0; p < mass.size(); ++p) {
            if (set.contains(p)) bulk += mass[p];
        }
        return perim - bulk;
    }
};

} // namespace detail

// Same functional over integer-quantized capacities; the exact solvers
// and the enumeration oracle both minimize this.
inline long long energy_quantized(const GridBand& grid, const DiscreteSet& set) {
    detail::require_admissible(grid, set);
    return detail::QuantizedModel(grid).eval(set);
}

// ---------------------------------------------------------------------
// Boundary extraction (2D)
// ---------------------------------------------------------------------

namespace detail {

struct DirectedFace {
    std::size_t from_corner, to_corner;
    std::array<double, 2> step;  // to - from, cell units scaled by cell size
    std::size_t inside, outside;
};

// Corner lattice ids; the cylinder wraps its corner rows.
inline std::size_t corner_id(const GridBand& grid, int i, int j) {
    const int rows = grid.topology() == GridBand::Topology::Cylinder ? grid.ny() : grid.ny() + 1;
    int jj = j;
    if (grid.topology() == GridBand::Topology::Cylinder) {
        jj = ((j % rows) + rows) % rows;
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rows) +
           static_cast<std::size_t>(jj);
}

// Collect the axis faces separating the set from its complement, each
// directed so that the set lies on the left.
inline std::vector<DirectedFace> boundary_faces(const GridBand& grid, const DiscreteSet& set) {
    std::vector<DirectedFace> faces;
    const double d = grid.cell_size();
    for (int x = 0; x < grid.nx(); ++x) {
        for (int y = 0; y < grid.ny(); ++y) {
            const std::size_t p = grid.cell_id(x, y);
            int ox, oy;
            if (grid.neighbor(x, y, 1, 0, ox, oy)) {
                const std::size_t q = grid.cell_id(ox, oy);
                if (set.contains(p) && !set.contains(q)) {
                    faces.push_back({corner_id(grid, x + 1, y), corner_id(grid, x + 1, y + 1),
                                     {0.0, d}, p, q});
                } else if (!set.contains(p) && set.contains(q)) {
                    faces.push_back({corner_id(grid, x + 1, y + 1), corner_id(grid, x + 1, y),
                                     {0.0, -d}, q, p});
                }
            }
            if (grid.neighbor(x, y, 0, 1, ox, oy)) {
                const std::size_t q = grid.cell_id(ox, oy);
                if (set.contains(p) && !set.contains(q)) {
                    faces.push_back({corner_id(grid, x + 1, y + 1), corner_id(grid, x, y + 1),
                                     {-d, 0.0}, p, q});
                } else if (!set.contains(p) && set.contains(q)) {
                    faces.push_back({corner_id(grid, x, y + 1), corner_id(grid, x + 1, y + 1),
                                     {d, 0.0}, q, p});
                }
            }
        }
    }
    return faces;
}

inline std::vector<BoundaryChain> extract_boundary(const GridBand& grid, const DiscreteSet& set) {
    const auto faces = boundary_faces(grid, set);
    std::map<std::size_t, std::vector<std::size_t>> outgoing;
    std::map<std::size_t, int> degree;  // out-degree minus in-degree
    for (std::size_t i = 0; i < faces.size(); ++i) {
        outgoing[faces[i].from_corner].push_back(i);
        degree[faces[i].from_corner] += 1;
        degree[faces[i].to_corner] -= 1;
    }

    std::vector<char> used(faces.size(), 0);
    std::vector<BoundaryChain> chains;

    const auto start_coord = [&](const DirectedFace& f) -> std::array<double, 2> {
        // Recover lattice coordinates of the start corner from its id.
        const int rows =
            grid.topology() == GridBand::Topology::Cylinder ? grid.ny() : grid.ny() + 1;
        const int i = static_cast<int>(f.from_corner) / rows;
        const int j = static_cast<int>(f.from_corner) % rows;
        return {i * grid.cell_size(), j * grid.cell_size()};
    };

    const auto walk = [&](std::size_t first, bool closed) {
        BoundaryChain chain;
        chain.closed = closed;
        std::array<double, 2> pos = start_coord(faces[first]);
        chain.vertices.push_back(pos);
        std::size_t cur = first;
        while (true) {
            used[cur] = 1;
            const auto& f = faces[cur];
            pos = {pos[0] + f.step[0], pos[1] + f.step[1]};
            chain.vertices.push_back(pos);
            chain.faces.emplace_back(f.inside, f.outside);
            const auto it = outgoing.find(f.to_corner);
            std::size_t next = faces.size();
            if (it != outgoing.end()) {
                for (std::size_t cand : it->second) {
                    if (!used[cand]) {
                        next = cand;
                        break;
                    }
                }
            }
            if (next == faces.size()) break;
            if (closed && next == first) break;
            cur = next;
        }
        chains.push_back(std::move(chain));
    };

    // Open chains start where out-degree exceeds in-degree (rectangle
    // boundary corners), then the remaining faces form closed loops.
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (!used[i] && degree[faces[i].from_corner] > 0) walk(i, false);
    }
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (!used[i]) walk(i, true);
    }
    return chains;
}

} // namespace detail

// ---------------------------------------------------------------------
// First variation and stability
// ---------------------------------------------------------------------

inline FirstVariationReport check_first_variation(const GridBand& grid,
                                                  const BubbleResult& result) {
    FirstVariationReport rep;
    if (grid.mode() == GridBand::Mode::Warped1D) {
        const int i = result.slice_face;
        rep.residual_max = std::fabs(grid.face_slice_mean_curv(i) - grid.face_h(i));
        rep.residual_mean = rep.residual_max;
        rep.samples = 1;
        return rep;
    }
    double sum = 0.0;
    int count = 0;
    for (const auto& chain : result.boundary) {
        const std::size_t m = chain.faces.size();
        if ((chain.closed && m < 5) || (!chain.closed && m < 6)) continue;
        const auto vertex = [&](std::ptrdiff_t i) -> std::array<double, 2> {
            if (chain.closed) {
                const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
                std::ptrdiff_t k = ((i % mm) + mm) % mm;
                // Unwrap across the seam: shift by the loop displacement.
                std::array<double, 2> v = chain.vertices[static_cast<std::size_t>(k)];
                const std::ptrdiff_t laps = (i - k) / mm;
                const auto& first = chain.vertices.front();
                const auto& last = chain.vertices.back();
                v[0] += laps * (last[0] - first[0]);
                v[1] += laps * (last[1] - first[1]);
                return v;
            }
            return chain.vertices[static_cast<std::size_t>(i)];
        };
        const auto face_h = [&](std::ptrdiff_t i) {
            const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
            const std::ptrdiff_t k = chain.closed ? ((i % mm) + mm) % mm : i;
            const auto& [in, out] = chain.faces[static_cast<std::size_t>(k)];
            return 0.5 * (grid.h_at(in) + grid.h_at(out));
        };
        const std::ptrdiff_t lo = chain.closed ? 0 : 2;
        const std::ptrdiff_t hi = chain.closed ? static_cast<std::ptrdiff_t>(m)
                                               : static_cast<std::ptrdiff_t>(m) - 2;
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            // Chord-smoothed turning rate: two 2-segment chords around
            // vertex i; left turns are positive (set on the left).
            const auto a = vertex(i - 2);
            const auto b = vertex(i);
            const auto c = vertex(i + 2);
            const double ux = b[0] - a[0], uy = b[1] - a[1];
            const double wx = c[0] - b[0], wy = c[1] - b[1];
            const double cross = ux * wy - uy * wx;
            const double dot = ux * wx + uy * wy;
            const double angle = std::atan2(cross, dot);
            const double len = 0.5 * (std::hypot(ux, uy) + std::hypot(wx, wy));
            const double kappa = angle / len;
            const double h_avg =
                0.25 * (face_h(i - 2) + face_h(i - 1) + face_h(i) + face_h(i + 1));
            const double residual = std::fabs(kappa - h_avg);
            rep.residual_max = std::max(rep.residual_max, residual);
            sum += residual;
            ++count;
        }
    }
    rep.samples = count;
    rep.residual_mean = count > 0 ? sum / count : 0.0;
    return rep;
}

inline StabilityCertificate stability_bound(
    const GridBand& grid, const BubbleResult& result,
    const std::function<double(double, double)>* scal_override = nullptr) {
    StabilityCertificate cert;
    const double nn = static_cast<double>(grid.dim()) / (grid.dim() - 1);
    double min_margin = std::numeric_limits<double>::infinity();
    double weighted_sum = 0.0;
    double total_weight = 0.0;

    if (grid.mode() == GridBand::Mode::Warped1D) {
        const int i = result.slice_face;
        const double t = grid.face_t(i);
        const double scal = scal_override ? (*scal_override)(t, 0.0) : grid.face_scal(i);
        const double h = grid.face_h(i);
        min_margin = scal + nn * h * h - 2.0 * std::fabs(grid.face_h_deriv(i));
        weighted_sum = min_margin;
        total_weight = 1.0;
    } else {
        for (const auto& chain : result.boundary) {
            for (const auto& [in, out] : chain.faces) {
                const double h = 0.5 * (grid.h_at(in) + grid.h_at(out));
                const double g =
                    0.5 * (grid.grad_h_magnitude(in) + grid.grad_h_magnitude(out));
                const double scal =
                    scal_override
                        ? (*scal_override)(0.5 * (grid.cell_x(in) + grid.cell_x(out) + 1.0) *
                                               grid.cell_size(),
                                           0.5 * (grid.cell_y(in) + grid.cell_y(out) + 1.0) *
                                               grid.cell_size())
                        : 0.5 * (grid.scal_at(in) + grid.scal_at(out));
                const double margin = scal + nn * h * h - 2.0 * g;
                min_margin = std::min(min_margin, margin);
                weighted_sum += margin * grid.cell_size();
                total_weight += grid.cell_size();
            }
        }
        if (total_weight == 0.0) {
            min_margin = 0.0;
            total_weight = 1.0;
        }
    }

    cert.min_margin = min_margin;
    cert.positive = min_margin > 0.0;
    cert.b = cert.positive ? 0.5 * min_margin : 0.0;
    // psi == 1 instance of the stability inequality: the boundary average
    // of the margin dominates its minimum, so this is >= b by
    // construction whenever the certificate is positive.
    cert.psi_one_check = 0.5 * (weighted_sum / total_weight);
    return cert;
}

// ---------------------------------------------------------------------
// 1D minimization
// ---------------------------------------------------------------------

inline BubbleResult minimize_1d(const GridBand& grid) {
    if (grid.mode() != GridBand::Mode::Warped1D) {
        throw DomainError("minimize_1d: grid must be in warped-1d mode");
    }
    detail::require_barriers(grid);

    const int cells = grid.cell_count_1d();
    // F(i) = w(face_i)^(n-1) - integral of h w^(n-1) over the first i cells.
    std::vector<double> bulk_prefix(static_cast<std::size_t>(cells) + 1, 0.0);
    for (int i = 0; i < cells; ++i) {
        bulk_prefix[static_cast<std::size_t>(i) + 1] =
            bulk_prefix[static_cast<std::size_t>(i)] + grid.mid_h(i) * grid.mid_wpow(i) * grid.dt();
    }
    const auto F = [&](int i) {
        return std::pow(grid.face_w(i), grid.dim() - 1) - bulk_prefix[static_cast<std::size_t>(i)];
    };

    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    int best = 1;
    for (int i = 1; i <= cells - 1; ++i) {
        const double v = F(i);
        if (v < fmin) {
            fmin = v;
            best = i;
        }
        fmax = std::max(fmax, v);
    }

    BubbleResult result;
    if (fmax - fmin <= 1e-12 * (1.0 + std::fabs(fmin))) {
        // Flat family of minimizers; report the midpoint slice.
        result.degenerate_family = true;
        best = cells / 2;
    } else if (best == 1 || best == cells - 1) {
        throw BoundaryMinimizerError(
            "minimize_1d: discrete minimizer sits in a collar (slice " + std::to_string(best) +
            " of " + std::to_string(cells) + "); the barriers are numerically insufficient");
    }

    result.slice_face = best;
    result.slice_t = grid.face_t(best);
    result.minimizer = DiscreteSet(static_cast<std::size_t>(cells));
    for (int i = 0; i < best; ++i) result.minimizer.insert(static_cast<std::size_t>(i));
    result.perimeter = std::pow(grid.face_w(best), grid.dim() - 1);
    result.bulk = bulk_prefix[static_cast<std::size_t>(best)];
    result.energy = result.perimeter - result.bulk;
    result.discrete_convexity =
        result.degenerate_family ||
        F(best - 1) + F(best + 1) - 2.0 * F(best) >= -1e-9 * (1.0 + std::fabs(F(best)));
    result.first_variation = check_first_variation(grid, result);
    result.stability = stability_bound(grid, result);
    return result;
}

// ---------------------------------------------------------------------
// 2D minimization (exact min-cut) and the enumeration oracle
// ---------------------------------------------------------------------

namespace detail {

inline void check_separation(const GridBand& grid, const DiscreteSet& set);

inline void finish_2d_result(const GridBand& grid, BubbleResult& result) {
    check_separation(grid, result.minimizer);
    result.boundary = extract_boundary(grid, result.minimizer);
    double perim = 0.0;
    for (const auto& pr : neighbor_pairs(grid)) {
        if (result.minimizer.contains(pr.a) != result.minimizer.contains(pr.b)) {
            perim += pr.weight;
        }
    }
    result.perimeter = perim;
    double bulk = 0.0;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (result.minimizer.contains(p)) bulk += grid.h_at(p) * grid.cell_volume();
    }
    result.bulk = bulk;
    result.energy = perim - bulk;
    result.first_variation = check_first_variation(grid, result);
    result.stability = stability_bound(grid, result);
}

// Boundary faces must separate the collars: removing them disconnects
// the 4-neighborhood graph between source and sink sides.
inline void check_separation(const GridBand& grid, const DiscreteSet& set) {
    std::vector<char> seen(grid.cell_count(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (grid.in_source_collar(p)) {
            seen[p] = 1;
            stack.push_back(p);
        }
    }
    while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        const int x = grid.cell_x(p);
        const int y = grid.cell_y(p);
        static constexpr int kAxis[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : kAxis) {
            int ox, oy;
            if (!grid.neighbor(x, y, d[0], d[1], ox, oy)) continue;
            const std::size_t q = grid.cell_id(ox, oy);
            if (seen[q]) continue;
            if (set.contains(p) != set.contains(q)) continue;  // crossing the boundary
            seen[q] = 1;
            stack.push_back(q);
        }
    }
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (grid.in_sink_collar(p) && seen[p]) {
            throw Error("internal: returned boundary does not separate the collars");
        }
    }
}

} // namespace detail

inline BubbleResult minimize_2d(const GridBand& grid) {
    if (grid.mode() != GridBand::Mode::Grid2D) {
        throw DomainError("minimize_2d: grid must be in grid-2d mode");
    }
    detail::require_barriers(grid);

    const std::size_t cells = grid.cell_count();
    const int source = static_cast<int>(cells);
    const int sink = static_cast<int>(cells) + 1;
    MaxFlow flow(static_cast<int>(cells) + 2);

    std::size_t finite_arcs = 0;
    for (const auto& pr : detail::neighbor_pairs(grid)) {
        const long long w = quantize_capacity(pr.weight);
        flow.add_edge(static_cast<int>(pr.a), static_cast<int>(pr.b), w, w);
        ++finite_arcs;
    }

    long long offset = 0;
    for (std::size_t p = 0; p < cells; ++p) {
        const long long m = quantize_capacity(grid.h_at(p) * grid.cell_volume());
        if (m > 0) offset += m;
        if (grid.in_source_collar(p)) {
            flow.add_edge(source, static_cast<int>(p), MaxFlow::kInfinite);
            if (m < 0) {
                flow.add_edge(static_cast<int>(p), sink, -m);
                ++finite_arcs;
            }
        } else if (grid.in_sink_collar(p)) {
            flow.add_edge(static_cast<int>(p), sink, MaxFlow::kInfinite);
            if (m > 0) {
                flow.add_edge(source, static_cast<int>(p), m);
                ++finite_arcs;
            }
        } else {
            if (m > 0) {
                flow.add_edge(source, static_cast<int>(p), m);
                ++finite_arcs;
            } else if (m < 0) {
                flow.add_edge(static_cast<int>(p), sink, -m);
                ++finite_arcs;
            }
        }
    }

    const long long value = flow.solve(source, sink);
    const std::vector<char> side = flow.min_cut_source_side();

    BubbleResult result;
    result.minimizer = DiscreteSet(cells);
    for (std::size_t p = 0; p < cells; ++p) {
        if (side[p]) result.minimizer.insert(p);
    }
    detail::require_admissible(grid, result.minimizer);

    result.energy_quantized = value - offset;
    result.quantization_error_bound = 0.5 / kCapacityScale * static_cast<double>(finite_arcs);
    detail::finish_2d_result(grid, result);
    return result;
}

inline int interior_cell_count(const GridBand& grid) {
    int c = 0;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (!grid.in_source_collar(p) && !grid.in_sink_collar(p)) ++c;
    }
    return c;
}

// Exact oracle: enumerates every admissible membership pattern over the
// interior cells and minimizes the quantized functional. The canonical
// minimizer is the intersection of all optimal sets, which is itself
// optimal because the functional is submodular.
inline BubbleResult brute_force_minimize(const GridBand& grid, int cell_budget = 20) {
    if (grid.mode() != GridBand::Mode::Grid2D) {
        throw DomainError("brute_force_minimize: grid must be in grid-2d mode");
    }
    detail::require_barriers(grid);

    std::vector<std::size_t> interior;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (!grid.in_source_collar(p) && !grid.in_sink_collar(p)) interior.push_back(p);
    }
    const int k = static_cast<int>(interior.size());
    if (k > cell_budget) {
        throw BudgetError("brute_force_minimize: " + std::to_string(k) +
                          " interior cells exceed the budget of " + std::to_string(cell_budget));
    }

    DiscreteSet base(grid.cell_count());
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (grid.in_source_collar(p)) base.insert(p);
    }

    const detail::QuantizedModel model(grid);
    long long best = std::numeric_limits<long long>::max();
    std::uint64_t canonical_mask = 0;
    DiscreteSet set = base;
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        for (int i = 0; i < k; ++i) {
            const std::size_t cell = interior[static_cast<std::size_t>(i)];
            if (mask & (1ull << i)) set.insert(cell);
            else set.erase(cell);
        }
        const long long e = model.eval(set);
        if (e < best) {
            best = e;
            canonical_mask = mask;
        } else if (e == best) {
            canonical_mask &= mask;
        }
    }

    BubbleResult result;
    result.minimizer = base;
    for (int i = 0; i < k; ++i) {
        if (canonical_mask & (1ull << i)) result.minimizer.insert(interior[static_cast<std::size_t>(i)]);
    }
    if (model.eval(result.minimizer) != best) {
        throw Error("internal: intersection of optimal sets lost optimality (submodularity breach)");
    }
    result.energy_quantized = best;
    result.quantization_error_bound = 0.0;
    detail::finish_2d_result(grid, result);
    return result;
}

// Every quantized-optimal admissible set; used by the lattice tests.
inline std::vector<DiscreteSet> enumerate_minimizers(const GridBand& grid, int cell_budget = 20) {
    std::vector<std::size_t> interior;
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (!grid.in_source_collar(p) && !grid.in_sink_collar(p)) interior.push_back(p);
    }
    const int k = static_cast<int>(interior.size());
    if (k > cell_budget) throw BudgetError("enumerate_minimizers: interior too large");

    DiscreteSet base(grid.cell_count());
    for (std::size_t p = 0; p < grid.cell_count(); ++p) {
        if (grid.in_source_collar(p)) base.insert(p);
    }
    const detail::QuantizedModel model(grid);
    long long best = std::numeric_limits<long long>::max();
    std::vector<DiscreteSet> out;
    DiscreteSet set = base;
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        for (int i = 0; i < k; ++i) {
            const std::size_t cell = interior[static_cast<std::size_t>(i)];
            if (mask & (1ull << i)) set.insert(cell);
            else set.erase(cell);
        }
        const long long e = model.eval(set);
        if (e < best) {
            best = e;
            out.clear();
            out.push_back(set);
        } else if (e == best) {
            out.push_back(set);
        }
    }
    return out;
}

} // namespace muband

#endif // MUBAND_BUBBLE_HPP
