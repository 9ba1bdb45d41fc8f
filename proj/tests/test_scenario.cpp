#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "muband/comparison.hpp"
#include "muband/scenario.hpp"

using namespace muband;

namespace {

TomlDocument parse(const std::string& text) {
    std::istringstream in(text);
    return parse_toml(in);
}

// Renders a full verify scenario from a freshly computed three-segment
// plan, 17 digits per number, as the CLI generator would.
std::string render_cor_scenario(double width_factor) {
    const ThreeSegmentPlan plan =
        plan_three_segment_comparison(7, 1.0, kPi / 7.0, CapFamily::Cone, 0.0, -30.0, -30.0);
    std::ostringstream out;
    out << "[band]\nn = 7\nwidths = [";
    for (std::size_t j = 0; j < 3; ++j) {
        out << (j ? ", " : "") << format_double(width_factor * plan.models[j].width());
    }
    out << "]\nscal_lower = [0.0, 42.0, 0.0]\n";
    out << "mean_curv_minus = "
        << format_double(plan.models.front().boundary_mean_curvatures().first) << "\n";
    out << "mean_curv_plus = "
        << format_double(plan.models.back().boundary_mean_curvatures().second) << "\n\n";
    const char* fams[3] = {"cone", "spherical", "cone"};
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& m = plan.models[j];
        out << "[[models]]\nfamily = \"" << fams[j] << "\"\n";
        if (j == 1) out << "kappa = 1.0\n";
        if (j == 2) out << "reflected = true\n";
        out << "domain = [" << format_double(m.domain_min()) << ", "
            << format_double(m.domain_max()) << "]\n\n";
    }
    out << "[solver]\neps = 0.0\ngrid = 4000\n";
    return out.str();
}

} // namespace

TEST_CASE("toml reader handles sections, arrays and comments") {
    const TomlDocument doc = parse(
        "# comment\n"
        "[alpha]\n"
        "x = 1\n"
        "y = 2.5  # trailing comment\n"
        "name = \"hello # not a comment\"\n"
        "flag = true\n"
        "items = [1, 2.5, 3]\n"
        "\n"
        "[[beta]]\n"
        "v = 1\n"
        "[[beta]]\n"
        "v = 2\n");
    const TomlTable& a = doc.single("alpha");
    CHECK(a.at("x").as_int() == 1);
    CHECK(a.at("y").as_double() == 2.5);
    CHECK(a.at("name").as_string() == "hello # not a comment");
    CHECK(a.at("flag").as_bool());
    CHECK(a.at("items").as_double_array() == std::vector<double>{1.0, 2.5, 3.0});
    REQUIRE(doc.sections.at("beta").size() == 2);
    CHECK(doc.sections.at("beta")[1].at("v").as_int() == 2);
}

TEST_CASE("toml reader rejects malformed input") {
    CHECK_THROWS_AS(parse("x = 1\n"), ParseError);                    // key outside section
    CHECK_THROWS_AS(parse("[a]\nx 1\n"), ParseError);                 // missing equals
    CHECK_THROWS_AS(parse("[a]\nx = \n"), ParseError);                // empty value
    CHECK_THROWS_AS(parse("[a]\nx = zzz\n"), ParseError);             // bad literal
    CHECK_THROWS_AS(parse("[a]\nx = 1\nx = 2\n"), ParseError);        // duplicate key
    CHECK_THROWS_AS(parse("[a]\nx = 1\n[a]\ny = 2\n"), ParseError);   // repeated section
    CHECK_THROWS_AS(parse("[a\nx = 1\n"), ParseError);                // unterminated header
    CHECK_THROWS_AS(parse("[a]\nx = \"abc\n"), ParseError);           // unterminated string
    CHECK_THROWS_AS(parse("[a]\nx = [1, 2\n"), ParseError);           // unterminated array
}

TEST_CASE("scenario schema rejects unknown sections and keys") {
    CHECK_THROWS_AS(load_scenario(parse("[mystery]\nx = 1\n")), ParseError);
    CHECK_THROWS_AS(load_scenario(parse("[band]\nn = 7\nwidths = [1.0]\nscal_lower = [0.0]\n"
                                        "typo_key = 3\n")),
                    ParseError);
    CHECK_THROWS_AS(load_scenario(parse("[solver]\neps = 0.1\nresolution = 3\n")), ParseError);
}

TEST_CASE("scenario schema reports missing required keys") {
    CHECK_THROWS_AS(load_scenario(parse("[band]\nn = 7\n")), ParseError);
    CHECK_THROWS_AS(load_scenario(parse("[band]\nn = 7\nwidths = [1.0]\n")), ParseError);
    CHECK_THROWS_AS(load_scenario(parse("[[models]]\nfamily = \"cone\"\n")), ParseError);
    CHECK_THROWS_AS(load_scenario(parse("[sweep]\nkappa = [1.0]\nd = [0.2]\n")), ParseError);
}

TEST_CASE("verify scenario round-trips through text into a contradiction verdict") {
    const Scenario sc = load_scenario(parse(render_cor_scenario(1.1)));
    REQUIRE(sc.band.has_value());
    CHECK(sc.band->n == 7);
    CHECK(sc.band->k() == 2);
    const auto models = build_models(sc);
    REQUIRE(models.size() == 3);
    CHECK(models[2].domain_max() < 0.0);  // reflected cap

    const ComparisonVerdict verdict =
        evaluate_partitioned(*sc.band, models, sc.eps, sc.grid_points);
    REQUIRE(verdict.has_contradiction());
    CHECK(verdict.contradiction->conditions.positive());
}

TEST_CASE("verify scenario with satisfied widths returns an index") {
    const Scenario sc = load_scenario(parse(render_cor_scenario(0.95)));
    const auto models = build_models(sc);
    const ComparisonVerdict verdict =
        evaluate_partitioned(*sc.band, models, sc.eps, sc.grid_points);
    REQUIRE(verdict.satisfied_index.has_value());
}

TEST_CASE("grid-2d scenarios build the declared field") {
    const Scenario sc = load_scenario(parse(
        "[grid]\n"
        "mode = \"grid-2d\"\n"
        "nx = 6\nny = 4\ncell = 0.25\n"
        "topology = \"cylinder\"\n"
        "h = \"affine-x\"\nh0 = 1.0\nh_slope = -1.0\n"
        "mean_curv_minus = 0.0\nmean_curv_plus = 0.0\n"));
    const GridBand grid = build_grid_band(sc);
    CHECK(grid.mode() == GridBand::Mode::Grid2D);
    CHECK(grid.nx() == 6);
    CHECK(grid.h_at(grid.cell_id(0, 0)) == doctest::Approx(1.0 - 0.125));
    CHECK(grid.h_at(grid.cell_id(5, 3)) == doctest::Approx(1.0 - 1.375));
}

TEST_CASE("warped-1d scenario with an assembled potential") {
    std::string text = render_cor_scenario(1.1);
    text +=
        "\n[grid]\n"
        "mode = \"warped-1d\"\n"
        "n = 7\n"
        "cells = 600\n"
        "h = \"assembled\"\n"
        "ambient = \"spherical\"\n"
        "ambient_kappa = 0.5\n";
    const Scenario sc = load_scenario(parse(text));
    const GridBand grid = build_grid_band(sc);
    CHECK(grid.mode() == GridBand::Mode::Warped1D);

    // The sampled h is the glued potential: recompute independently.
    const auto models = build_models(sc);
    const double eps = choose_epsilon(*sc.band, models, sc.grid_points);
    const AssembledPotential pot = assemble(*sc.band, models, eps, sc.grid_points);
    CHECK(grid.face_t(0) == 0.0);
    CHECK(grid.face_t(grid.cell_count_1d()) == doctest::Approx(pot.domain_max()));
    for (int i : {0, 100, 300, 599}) {
        CHECK(grid.face_h(i) == doctest::Approx(pot.value(grid.face_t(i))).epsilon(1e-12));
    }
}

TEST_CASE("reflected hyperbolic models build from scenario text") {
    const Scenario sc = load_scenario(parse(
        "[band]\nn = 5\nwidths = [1.0]\nscal_lower = [-2.0]\n"
        "mean_curv_minus = 0.0\nmean_curv_plus = 0.0\n"
        "[[models]]\nfamily = \"hyperbolic\"\nsigma = 2.0\nreflected = true\n"
        "domain = [-1.5, -0.4]\n"));
    const auto models = build_models(sc);
    REQUIRE(models.size() == 1);
    CHECK(models[0].domain_min() == doctest::Approx(-1.5));
    CHECK(models[0].domain_max() == doctest::Approx(-0.4));
    CHECK(models[0].nominal_sigma() == doctest::Approx(-2.0));
    // Reflected potentials are negative on the negative axis.
    CHECK(models[0].potential(-0.4) < 0.0);
}

TEST_CASE("sweep section parses into ordered parameter lists") {
    const Scenario sc = load_scenario(parse(
        "[sweep]\n"
        "n = [2, 7]\n"
        "kappa = [0.5, 1.0]\n"
        "sigma = [0.0, 5.0]\n"
        "d = [0.2, 0.4]\n"));
    REQUIRE(sc.sweep.has_value());
    CHECK(sc.sweep->n == std::vector<long long>{2, 7});
    CHECK(sc.sweep->kappa == std::vector<double>{0.5, 1.0});
    CHECK(sc.sweep->sigma == std::vector<double>{0.0, 5.0});
    CHECK(sc.sweep->d == std::vector<double>{0.2, 0.4});
}
