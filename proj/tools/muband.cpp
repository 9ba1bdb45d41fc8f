// muband command line front end: model-space tables, width bounds,
// band verification, discrete bubble solves and parameter sweeps driven
// by declarative scenario files.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muband/bubble.hpp"
#include "muband/comparison.hpp"
#include "muband/csv.hpp"
#include "muband/scenario.hpp"
#include "muband/smoothing.hpp"

namespace {

using namespace muband;

constexpr int kExitOk = 0;
constexpr int kExitHypothesis = 2;
constexpr int kExitContradiction = 3;
constexpr int kExitParse = 64;

int error_exit_code(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 64;
    if (dynamic_cast<const HypothesisError*>(&e)) return kExitHypothesis;
    if (dynamic_cast<const DomainError*>(&e)) return 65;
    if (dynamic_cast<const WidthError*>(&e)) return 66;
    if (dynamic_cast<const MatchError*>(&e)) return 67;
    if (dynamic_cast<const NoRootError*>(&e)) return 68;
    if (dynamic_cast<const ThresholdError*>(&e)) return 69;
    if (dynamic_cast<const BarrierError*>(&e)) return 70;
    if (dynamic_cast<const CertificateError*>(&e)) return 71;
    if (dynamic_cast<const BoundaryMinimizerError*>(&e)) return 72;
    if (dynamic_cast<const AdmissibilityError*>(&e)) return 73;
    if (dynamic_cast<const BudgetError*>(&e)) return 74;
    return 1;
}

struct OutputSink {
    std::string dir;      // empty = console only
    std::string format;   // csv | table

    void emit(const Table& table, const std::string& name) const {
        if (!dir.empty()) {
            std::filesystem::create_directories(dir);
            table.write_csv((std::filesystem::path(dir) / (name + ".csv")).string());
        }
        if (dir.empty() || format == "table") {
            std::cout << "-- " << name << " --\n";
            table.print(std::cout);
        }
    }
};

Table key_value_table() { return Table({"key", "value"}); }

WarpingFamily parse_family(const std::string& name) {
    if (name == "spherical") return WarpingFamily::Spherical;
    if (name == "cone") return WarpingFamily::Cone;
    if (name == "hyperbolic") return WarpingFamily::Hyperbolic;
    throw ParseError("unknown family '" + name + "' (expected spherical, cone or hyperbolic)");
}

ModelSpace model_from_flags(const std::string& family, int n, double kappa, double sigma,
                            double a, double b) {
    switch (parse_family(family)) {
        case WarpingFamily::Spherical: return make_spherical(n, kappa, a, b);
        case WarpingFamily::Cone: return make_cone(n, a, b);
        case WarpingFamily::Hyperbolic: return make_hyperbolic(n, sigma, a, b);
        default: break;
    }
    throw ParseError("unsupported family");
}

// ------------------------------------------------------------------
// model: tabulate phi, h, h', scal over a grid
// ------------------------------------------------------------------
int run_model(const std::string& family, int n, double kappa, double sigma, double a, double b,
              int grid, const OutputSink& sink) {
    const ModelSpace ms = model_from_flags(family, n, kappa, sigma, a, b);
    Table table({"t", "phi", "h", "h_deriv", "scal"});
    for (double t : uniform_grid(ms.domain_min(), ms.domain_max(), grid)) {
        table.add_row({Table::cell(t), Table::cell(ms.warping().phi(t)),
                       Table::cell(ms.potential(t)), Table::cell(ms.potential_deriv(t)),
                       Table::cell(ms.scalar_curvature(t))});
    }
    sink.emit(table, "model");

    Table summary = key_value_table();
    const auto [hlo, hhi] = ms.boundary_mean_curvatures();
    summary.add_row({"family", family});
    summary.add_row({"n", Table::cell(n)});
    summary.add_row({"width", Table::cell(ms.width())});
    summary.add_row({"sigma_nominal", Table::cell(ms.nominal_sigma())});
    summary.add_row({"mean_curv_lower", Table::cell(hlo)});
    summary.add_row({"mean_curv_upper", Table::cell(hhi)});
    sink.emit(summary, "summary");
    return kExitOk;
}

// ------------------------------------------------------------------
// potential: tabulate the smoothed potential and its certificate
// ------------------------------------------------------------------
int run_potential(const std::string& family, int n, double kappa, double sigma, double a,
                  double b, double eps, const std::string& side_name, int grid,
                  const OutputSink& sink) {
    CutoffProfile::Side side = CutoffProfile::Side::Both;
    if (side_name == "left") side = CutoffProfile::Side::LeftOnly;
    else if (side_name == "right") side = CutoffProfile::Side::RightOnly;
    else if (side_name != "both") throw ParseError("--side must be both, left or right");

    const ModelSpace ms = model_from_flags(family, n, kappa, sigma, a, b);
    const SmoothedPotential pot(ms, eps, side, grid);
    Table table({"t", "h_hat", "h_hat_deriv", "curvature_slack"});
    for (double t : uniform_grid(pot.domain_min(), pot.domain_max(), grid)) {
        const double h = pot.value(t);
        const double hp = pot.deriv(t);
        const double rhs = -(static_cast<double>(n) / (n - 1)) * h * h - 2.0 * hp;
        table.add_row({Table::cell(t), Table::cell(h), Table::cell(hp),
                       Table::cell(pot.sigma() - rhs)});
    }
    sink.emit(table, "potential");

    Table summary = key_value_table();
    summary.add_row({"sigma", Table::cell(pot.sigma())});
    summary.add_row({"eps", Table::cell(pot.eps())});
    summary.add_row({"left_value", Table::cell(pot.left_value())});
    summary.add_row({"right_value", Table::cell(pot.right_value())});
    summary.add_row({"min_strict_margin", Table::cell(pot.certificate().min_strict_margin)});
    sink.emit(summary, "summary");
    return kExitOk;
}

// ------------------------------------------------------------------
// width: classical bound and the two cap bounds
// ------------------------------------------------------------------
int run_width(int n, double kappa, double sigma, double d, const OutputSink& sink) {
    Table table({"kind", "n", "kappa", "sigma", "d", "ell", "residual"});
    table.add_row({"classical", Table::cell(n), Table::cell(kappa), Table::cell(0.0),
                   Table::cell(d), Table::cell(classical_bound(n, kappa)), Table::cell(0.0)});
    const WidthBound nonneg = ell_nonneg(n, kappa, d);
    table.add_row({"nonneg-ambient", Table::cell(n), Table::cell(kappa), Table::cell(0.0),
                   Table::cell(d), Table::cell(nonneg.value), Table::cell(nonneg.residual)});
    if (sigma > 0.0) {
        const WidthBound neg = ell_negative(n, kappa, sigma, d);
        table.add_row({neg.divergence_note ? "negative-ambient (near threshold)"
                                           : "negative-ambient",
                       Table::cell(n), Table::cell(kappa), Table::cell(sigma), Table::cell(d),
                       Table::cell(neg.value), Table::cell(neg.residual)});
    }
    sink.emit(table, "width");
    return kExitOk;
}

// ------------------------------------------------------------------
// verify: hypotheses + assembly + condition certificate
// ------------------------------------------------------------------
int run_verify(const std::string& scenario_path, double eps_flag, int grid_flag,
               const OutputSink& sink_flag) {
    const Scenario sc = load_scenario_file(scenario_path);
    if (!sc.band) throw ParseError("verify: scenario needs a [band] section");
    if (sc.models.empty()) throw ParseError("verify: scenario needs [[models]] sections");
    OutputSink sink = sink_flag;
    if (sink.dir.empty()) sink.dir = sc.output_dir;
    if (sink.format.empty()) sink.format = sc.format;

    const double eps = eps_flag > 0.0 ? eps_flag : sc.eps;
    const int grid = grid_flag > 0 ? grid_flag : sc.grid_points;
    const auto models = build_models(sc);
    const ComparisonVerdict verdict = evaluate_partitioned(*sc.band, models, eps, grid);

    Table widths({"segment", "width_measured", "width_model", "scal_lower", "sigma_model"});
    for (std::size_t j = 0; j < models.size(); ++j) {
        widths.add_row({Table::cell(static_cast<int>(j) + 1),
                        Table::cell(sc.band->segments[j].width), Table::cell(models[j].width()),
                        Table::cell(sc.band->segments[j].scal_lower),
                        Table::cell(models[j].nominal_sigma())});
    }
    sink.emit(widths, "widths");

    Table summary = key_value_table();
    int exit_code;
    if (verdict.satisfied_index) {
        summary.add_row({"verdict", "width-comparison-satisfied"});
        summary.add_row({"index", Table::cell(*verdict.satisfied_index)});
        exit_code = kExitOk;
    } else {
        const ContradictionCertificate& cc = *verdict.contradiction;
        summary.add_row({"verdict", "contradiction-certificate"});
        summary.add_row({"note", "analytic certificate only; the separation property of the "
                                 "band is declared input and is not verified here"});
        summary.add_row({"eps", Table::cell(cc.eps)});
        summary.add_row({"min_interior_margin", Table::cell(cc.conditions.min_interior_margin)});
        summary.add_row({"argmin_x", Table::cell(cc.conditions.argmin_x)});
        summary.add_row(
            {"boundary_margin_lower", Table::cell(cc.conditions.boundary_margin_lower)});
        summary.add_row(
            {"boundary_margin_upper", Table::cell(cc.conditions.boundary_margin_upper)});
        summary.add_row(
            {"max_junction_mismatch", Table::cell(cc.potential.max_junction_mismatch())});
        summary.add_row({"certificate_positive", cc.conditions.positive() ? "true" : "false"});

        // Same grid as the certificate, so its minimum margin is exactly
        // re-derivable from this table.
        Table profile({"x", "h", "dh_dx", "margin"});
        const double nn = static_cast<double>(sc.band->n) / (sc.band->n - 1);
        for (double x : uniform_grid(cc.potential.domain_min(), cc.potential.domain_max(), grid)) {
            const double hv = cc.potential.value(x);
            const double hp = cc.potential.deriv(x);
            const std::size_t j = cc.potential.segment_index(x);
            const double margin =
                sc.band->segments[j].scal_lower + nn * hv * hv - 2.0 * std::fabs(hp);
            profile.add_row(
                {Table::cell(x), Table::cell(hv), Table::cell(hp), Table::cell(margin)});
        }
        sink.emit(profile, "potential");
        exit_code = kExitContradiction;
    }
    sink.emit(summary, "summary");
    std::cout << (exit_code == kExitOk ? "verify: width comparison satisfied\n"
                                       : "verify: contradiction certificate emitted\n");
    return exit_code;
}

// ------------------------------------------------------------------
// bubble: discrete minimization
// ------------------------------------------------------------------
int run_bubble(const std::string& scenario_path, const OutputSink& sink_flag) {
    const Scenario sc = load_scenario_file(scenario_path);
    OutputSink sink = sink_flag;
    if (sink.dir.empty()) sink.dir = sc.output_dir;
    if (sink.format.empty()) sink.format = sc.format;

    const GridBand grid = build_grid_band(sc);
    const BarrierReport barriers = check_barriers(grid);
    const BubbleResult result =
        grid.mode() == GridBand::Mode::Warped1D ? minimize_1d(grid) : minimize_2d(grid);

    Table summary = key_value_table();
    summary.add_row({"mode", grid.mode() == GridBand::Mode::Warped1D ? "warped-1d" : "grid-2d"});
    summary.add_row({"energy", Table::cell(result.energy)});
    summary.add_row({"perimeter", Table::cell(result.perimeter)});
    summary.add_row({"bulk", Table::cell(result.bulk)});
    summary.add_row({"barrier_margin_lower", Table::cell(barriers.margin_lower)});
    summary.add_row({"barrier_margin_upper", Table::cell(barriers.margin_upper)});
    summary.add_row({"stability_b", Table::cell(result.stability.b)});
    summary.add_row({"stability_min_margin", Table::cell(result.stability.min_margin)});
    summary.add_row({"psi_one_check", Table::cell(result.stability.psi_one_check)});
    summary.add_row({"residual_max", Table::cell(result.first_variation.residual_max)});
    summary.add_row({"residual_mean", Table::cell(result.first_variation.residual_mean)});

    if (grid.mode() == GridBand::Mode::Warped1D) {
        summary.add_row({"slice_t", Table::cell(result.slice_t)});
        summary.add_row({"degenerate_family", result.degenerate_family ? "true" : "false"});
        Table profile({"t", "w", "h", "slice_mean_curv"});
        for (int i = 0; i <= grid.cell_count_1d(); ++i) {
            profile.add_row({Table::cell(grid.face_t(i)), Table::cell(grid.face_w(i)),
                             Table::cell(grid.face_h(i)),
                             Table::cell(grid.face_slice_mean_curv(i))});
        }
        sink.emit(profile, "profile");
        Table boundary({"chain", "vertex", "x", "y"});
        boundary.add_row({Table::cell(0), Table::cell(0), Table::cell(result.slice_t),
                          Table::cell(0.0)});
        sink.emit(boundary, "boundary");
    } else {
        summary.add_row({"energy_quantized", Table::cell(result.energy_quantized)});
        summary.add_row(
            {"quantization_error_bound", Table::cell(result.quantization_error_bound)});
        double centroid = 0.0;
        std::size_t verts = 0;
        Table boundary({"chain", "vertex", "x", "y"});
        for (std::size_t c = 0; c < result.boundary.size(); ++c) {
            const auto& chain = result.boundary[c];
            for (std::size_t i = 0; i < chain.vertices.size(); ++i) {
                boundary.add_row({Table::cell(static_cast<int>(c)),
                                  Table::cell(static_cast<int>(i)),
                                  Table::cell(chain.vertices[i][0]),
                                  Table::cell(chain.vertices[i][1])});
                centroid += chain.vertices[i][0];
                ++verts;
            }
        }
        sink.emit(boundary, "boundary");
        summary.add_row(
            {"boundary_centroid_x", Table::cell(verts ? centroid / verts : 0.0)});
        summary.add_row({"boundary_chains", Table::cell(static_cast<int>(result.boundary.size()))});
    }
    sink.emit(summary, "summary");
    std::cout << "bubble: energy " << format_double(result.energy, 10) << ", stability b "
              << format_double(result.stability.b, 10) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------
// sweep: one CSV row per parameter point
// ------------------------------------------------------------------
int run_sweep(const std::string& scenario_path, const OutputSink& sink_flag) {
    const Scenario sc = load_scenario_file(scenario_path);
    if (!sc.sweep) throw ParseError("sweep: scenario needs a [sweep] section");
    OutputSink sink = sink_flag;
    if (sink.dir.empty()) sink.dir = sc.output_dir;
    if (sink.format.empty()) sink.format = sc.format;

    Table table({"n", "kappa", "sigma", "d", "classical", "ell_nonneg", "residual_nonneg",
                 "ell_negative", "residual_negative", "status"});
    for (long long n : sc.sweep->n) {
        for (double kappa : sc.sweep->kappa) {
            for (double sigma : sc.sweep->sigma) {
                for (double d : sc.sweep->d) {
                    std::string status = "ok";
                    std::string cls = "nan", e0 = "nan", r0 = "nan", e1 = "nan", r1 = "nan";
                    try {
                        cls = Table::cell(classical_bound(static_cast<int>(n), kappa));
                        const WidthBound nn = ell_nonneg(static_cast<int>(n), kappa, d);
                        e0 = Table::cell(nn.value);
                        r0 = Table::cell(nn.residual);
                        if (sigma > 0.0) {
                            const WidthBound ng = ell_negative(static_cast<int>(n), kappa, sigma, d);
                            e1 = Table::cell(ng.value);
                            r1 = Table::cell(ng.residual);
                            if (ng.divergence_note) status = "near-threshold";
                        }
                    } catch (const ThresholdError&) {
                        status = "sigma-above-threshold";
                    } catch (const DomainError&) {
                        status = "d-out-of-range";
                    }
                    table.add_row({Table::cell(static_cast<int>(n)), Table::cell(kappa),
                                   Table::cell(sigma), Table::cell(d), cls, e0, r0, e1, r1,
                                   status});
                }
            }
        }
    }
    sink.emit(table, "sweep");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"muband: warped band models, width bounds and discrete mu-bubbles"};
    app.require_subcommand(1);

    std::string family = "spherical", side = "both", scenario, out_dir, format;
    int n = 7, grid = 0;
    double kappa = 1.0, sigma = 0.0, d = 0.0, eps = 0.0, a = 0.0, b = 0.0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory for CSV files");
        cmd->add_option("--format", format, "csv or table")
            ->check(CLI::IsMember({"csv", "table"}));
    };

    CLI::App* cmd_model = app.add_subcommand("model", "tabulate a model space");
    cmd_model->add_option("--family", family, "spherical | cone | hyperbolic");
    cmd_model->add_option("--n", n, "dimension (2..7)");
    cmd_model->add_option("--kappa", kappa, "curvature scale");
    cmd_model->add_option("--sigma", sigma, "negative-curvature magnitude");
    cmd_model->add_option("--a", a, "lower domain endpoint")->required();
    cmd_model->add_option("--b", b, "upper domain endpoint")->required();
    cmd_model->add_option("--grid", grid, "sample points");
    add_common(cmd_model);

    CLI::App* cmd_pot = app.add_subcommand("potential", "tabulate a smoothed potential");
    cmd_pot->add_option("--family", family);
    cmd_pot->add_option("--n", n);
    cmd_pot->add_option("--kappa", kappa);
    cmd_pot->add_option("--sigma", sigma);
    cmd_pot->add_option("--a", a)->required();
    cmd_pot->add_option("--b", b)->required();
    cmd_pot->add_option("--eps", eps, "transition width")->required();
    cmd_pot->add_option("--side", side, "both | left | right");
    cmd_pot->add_option("--grid", grid);
    add_common(cmd_pot);

    CLI::App* cmd_width = app.add_subcommand("width", "evaluate width bounds");
    cmd_width->add_option("--n", n);
    cmd_width->add_option("--kappa", kappa);
    cmd_width->add_option("--sigma", sigma);
    cmd_width->add_option("--d", d, "middle segment width")->required();
    add_common(cmd_width);

    CLI::App* cmd_verify = app.add_subcommand("verify", "verify a partitioned band scenario");
    cmd_verify->add_option("scenario", scenario, "scenario file (TOML)")->required();
    cmd_verify->add_option("--eps", eps);
    cmd_verify->add_option("--grid", grid);
    add_common(cmd_verify);

    CLI::App* cmd_bubble = app.add_subcommand("bubble", "solve a discrete bubble scenario");
    cmd_bubble->add_option("scenario", scenario, "scenario file (TOML)")->required();
    add_common(cmd_bubble);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    cmd_sweep->add_option("scenario", scenario, "scenario file (TOML)")->required();
    add_common(cmd_sweep);

    CLI11_PARSE(app, argc, argv);

    const OutputSink sink{out_dir, format.empty() ? "csv" : format};
    const int table_grid = grid > 0 ? grid : 101;
    try {
        if (cmd_model->parsed()) {
            return run_model(family, n, kappa, sigma, a, b, table_grid, sink);
        }
        if (cmd_pot->parsed()) {
            return run_potential(family, n, kappa, sigma, a, b, eps, side,
                                 grid > 0 ? grid : kDefaultGridPoints, sink);
        }
        if (cmd_width->parsed()) {
            return run_width(n, kappa, sigma, d, sink);
        }
        if (cmd_verify->parsed()) {
            return run_verify(scenario, eps, grid, OutputSink{out_dir, format});
        }
        if (cmd_bubble->parsed()) {
            return run_bubble(scenario, OutputSink{out_dir, format});
        }
        if (cmd_sweep->parsed()) {
            return run_sweep(scenario, OutputSink{out_dir, format});
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitParse;
}
