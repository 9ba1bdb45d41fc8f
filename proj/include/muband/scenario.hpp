#ifndef MUBAND_SCENARIO_HPP
#define MUBAND_SCENARIO_HPP

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "muband/assembly.hpp"
#include "muband/errors.hpp"
#include "muband/grid_band.hpp"
#include "muband/model_space.hpp"

namespace muband {

// ---------------------------------------------------------------------
// Minimal TOML-style reader: [section], [[section]] arrays, key = value
// with numbers, strings, booleans and flat arrays. Anything else is a
// ParseError, and scenario schemas reject unknown keys.
// ---------------------------------------------------------------------

struct TomlValue {
    std::variant<long long, double, bool, std::string, std::vector<TomlValue>> v;

    bool is_number() const {
        return std::holds_alternative<long long>(v) || std::holds_alternative<double>(v);
    }
    double as_double() const {
        if (std::holds_alternative<long long>(v)) {
            return static_cast<double>(std::get<long long>(v));
        }
        if (std::holds_alternative<double>(v)) return std::get<double>(v);
        throw ParseError("expected a number");
    }
    long long as_int() const {
        if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
        throw ParseError("expected an integer");
    }
    bool as_bool() const {
        if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
        throw ParseError("expected a boolean");
    }
    const std::string& as_string() const {
        if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
        throw ParseError("expected a string");
    }
    std::vector<double> as_double_array() const {
        if (!std::holds_alternative<std::vector<TomlValue>>(v)) {
            throw ParseError("expected an array");
        }
        std::vector<double> out;
        for (const auto& e : std::get<std::vector<TomlValue>>(v)) out.push_back(e.as_double());
        return out;
    }
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDocument {
    std::map<std::string, std::vector<TomlTable>> sections;

    bool has(const std::string& name) const { return sections.count(name) > 0; }

    const TomlTable& single(const std::string& name) const {
        const auto it = sections.find(name);
        if (it == sections.end() || it->second.empty()) {
            throw ParseError("missing [" + name + "] section");
        }
        if (it->second.size() > 1) {
            throw ParseError("section [" + name + "] given more than once");
        }
        return it->second.front();
    }
};

namespace toml_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline TomlValue parse_scalar(const std::string& raw, int lineno) {
    const std::string s = trim(raw);
    if (s.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') {
            throw ParseError("line " + std::to_string(lineno) + ": unterminated string");
        }
        return TomlValue{s.substr(1, s.size() - 2)};
    }
    if (s == "true") return TomlValue{true};
    if (s == "false") return TomlValue{false};
    // Number: integer when it round-trips without . e E inf nan.
    const bool looks_int = s.find_first_of(".eEni") == std::string::npos;
    try {
        std::size_t used = 0;
        if (looks_int) {
            const long long v = std::stoll(s, &used);
            if (used == s.size()) return TomlValue{v};
        }
        const double v = std::stod(s, &used);
        if (used == s.size()) return TomlValue{v};
    } catch (...) {
    }
    throw ParseError("line " + std::to_string(lineno) + ": cannot parse value '" + s + "'");
}

inline TomlValue parse_value(const std::string& raw, int lineno) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') {
            throw ParseError("line " + std::to_string(lineno) + ": unterminated array");
        }
        std::vector<TomlValue> items;
        std::string body = s.substr(1, s.size() - 2);
        std::size_t start = 0;
        bool in_string = false;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i < body.size() && body[i] == '"') in_string = !in_string;
            if (i == body.size() || (body[i] == ',' && !in_string)) {
                const std::string piece = trim(body.substr(start, i - start));
                if (!piece.empty()) items.push_back(parse_scalar(piece, lineno));
                start = i + 1;
            }
        }
        return TomlValue{std::move(items)};
    }
    return parse_scalar(s, lineno);
}

} // namespace toml_detail

inline TomlDocument parse_toml(std::istream& in) {
    TomlDocument doc;
    TomlTable* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = toml_detail::trim(toml_detail::strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            const bool is_array = s.size() > 1 && s[1] == '[';
            const std::string close = is_array ? "]]" : "]";
            if (s.substr(s.size() - close.size()) != close) {
                throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
            }
            const std::string name = toml_detail::trim(
                s.substr(is_array ? 2 : 1, s.size() - 2 * (is_array ? 2 : 1)));
            if (name.empty()) {
                throw ParseError("line " + std::to_string(lineno) + ": empty section name");
            }
            auto& vec = doc.sections[name];
            if (!is_array && !vec.empty()) {
                throw ParseError("line " + std::to_string(lineno) + ": section [" + name +
                                 "] repeated; use [[" + name + "]] for arrays");
            }
            vec.emplace_back();
            current = &vec.back();
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        }
        if (current == nullptr) {
            throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
        }
        const std::string key = toml_detail::trim(s.substr(0, eq));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (current->count(key)) {
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        (*current)[key] = toml_detail::parse_value(s.substr(eq + 1), lineno);
    }
    return doc;
}

inline TomlDocument parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path);
    return parse_toml(in);
}

// ---------------------------------------------------------------------
// Scenario schema
// ---------------------------------------------------------------------

struct ModelConfig {
    std::string family;  // spherical | cone | hyperbolic
    double kappa = 0.0;
    double sigma = 0.0;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    bool reflected = false;
};

struct GridConfig {
    std::string mode;  // grid-2d | warped-1d
    // grid-2d
    int nx = 0, ny = 0;
    double cell = 0.0;
    std::string topology = "cylinder";
    std::string h_kind = "constant";  // constant | affine-x | assembled
    double h0 = 0.0;
    double h_slope = 0.0;
    double mean_curv_minus = 0.0;
    double mean_curv_plus = 0.0;
    int collar = 1;
    // warped-1d
    int n = 2;
    int cells = 0;
    std::string ambient = "flat";  // flat | spherical
    double ambient_kappa = 0.0;
    std::optional<double> ambient_center;
};

struct SweepConfig {
    std::vector<long long> n;
    std::vector<double> kappa;
    std::vector<double> sigma;  // 0 entries mean "non-negative ambient only"
    std::vector<double> d;
};

struct Scenario {
    std::optional<PartitionedBandSpec> band;
    std::vector<ModelConfig> models;
    std::optional<GridConfig> grid;
    std::optional<SweepConfig> sweep;
    double eps = 0.0;  // 0 = choose automatically
    int grid_points = kDefaultGridPoints;
    std::string output_dir = "out";
    std::string format = "csv";
};

namespace scenario_detail {

inline void check_keys(const TomlTable& table, const std::set<std::string>& allowed,
                       const std::string& section) {
    for (const auto& [key, value] : table) {
        if (!allowed.count(key)) {
            throw ParseError("unknown key '" + key + "' in [" + section + "]");
        }
    }
}

inline double get_double(const TomlTable& t, const std::string& key, double fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_double();
}

inline long long get_int(const TomlTable& t, const std::string& key, long long fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_int();
}

inline std::string get_string(const TomlTable& t, const std::string& key,
                              const std::string& fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_string();
}

inline const TomlValue& need(const TomlTable& t, const std::string& key,
                             const std::string& section) {
    const auto it = t.find(key);
    if (it == t.end()) {
        throw ParseError("missing key '" + key + "' in [" + section + "]");
    }
    return it->second;
}

} // namespace scenario_detail

inline Scenario load_scenario(const TomlDocument& doc) {
    using namespace scenario_detail;
    Scenario sc;

    for (const auto& [name, tables] : doc.sections) {
        if (name != "band" && name != "models" && name != "solver" && name != "output" &&
            name != "grid" && name != "sweep") {
            throw ParseError("unknown section [" + name + "]");
        }
    }

    if (doc.has("band")) {
        const TomlTable& t = doc.single("band");
        check_keys(t, {"n", "k", "widths", "scal_lower", "mean_curv_minus", "mean_curv_plus"},
                   "band");
        PartitionedBandSpec spec;
        spec.n = static_cast<int>(get_int(t, "n", 0));
        const auto widths = need(t, "widths", "band").as_double_array();
        const auto scal = need(t, "scal_lower", "band").as_double_array();
        if (widths.size() != scal.size()) {
            throw ParseError("[band]: widths and scal_lower must have equal length");
        }
        for (std::size_t j = 0; j < widths.size(); ++j) {
            spec.segments.push_back({widths[j], scal[j]});
        }
        if (t.count("k") && get_int(t, "k", -1) != spec.k()) {
            throw ParseError("[band]: k does not match widths length minus one");
        }
        spec.mean_curv_minus = get_double(t, "mean_curv_minus", 0.0);
        spec.mean_curv_plus = get_double(t, "mean_curv_plus", 0.0);
        sc.band = spec;
    }

    if (doc.has("models")) {
        for (const TomlTable& t : doc.sections.at("models")) {
            check_keys(t, {"family", "kappa", "sigma", "domain", "reflected"}, "models");
            ModelConfig mc;
            mc.family = get_string(t, "family", "");
            if (mc.family != "spherical" && mc.family != "cone" && mc.family != "hyperbolic") {
                throw ParseError("[[models]]: family must be spherical, cone or hyperbolic");
            }
            mc.kappa = get_double(t, "kappa", 0.0);
            mc.sigma = get_double(t, "sigma", 0.0);
            const auto dom = need(t, "domain", "models").as_double_array();
            if (dom.size() != 2) throw ParseError("[[models]]: domain must be [lo, hi]");
            mc.domain_lo = dom[0];
            mc.domain_hi = dom[1];
            const auto rit = t.find("reflected");
            mc.reflected = rit != t.end() && rit->second.as_bool();
            sc.models.push_back(mc);
        }
    }

    if (doc.has("solver")) {
        const TomlTable& t = doc.single("solver");
        check_keys(t, {"eps", "grid"}, "solver");
        sc.eps = get_double(t, "eps", 0.0);
        sc.grid_points = static_cast<int>(get_int(t, "grid", kDefaultGridPoints));
    }

    if (doc.has("output")) {
        const TomlTable& t = doc.single("output");
        check_keys(t, {"dir", "format"}, "output");
        sc.output_dir = get_string(t, "dir", "out");
        sc.format = get_string(t, "format", "csv");
        if (sc.format != "csv" && sc.format != "table") {
            throw ParseError("[output]: format must be csv or table");
        }
    }

    if (doc.has("grid")) {
        const TomlTable& t = doc.single("grid");
        check_keys(t,
                   {"mode", "nx", "ny", "cell", "topology", "h", "h0", "h_slope",
                    "mean_curv_minus", "mean_curv_plus", "collar", "n", "cells", "ambient",
                    "ambient_kappa", "ambient_center"},
                   "grid");
        GridConfig gc;
        gc.mode = get_string(t, "mode", "");
        if (gc.mode != "grid-2d" && gc.mode != "warped-1d") {
            throw ParseError("[grid]: mode must be grid-2d or warped-1d");
        }
        gc.nx = static_cast<int>(get_int(t, "nx", 0));
        gc.ny = static_cast<int>(get_int(t, "ny", 0));
        gc.cell = get_double(t, "cell", 0.0);
        gc.topology = get_string(t, "topology", "cylinder");
        if (gc.topology != "cylinder" && gc.topology != "rectangle") {
            throw ParseError("[grid]: topology must be cylinder or rectangle");
        }
        gc.h_kind = get_string(t, "h", "constant");
        if (gc.h_kind != "constant" && gc.h_kind != "affine-x" && gc.h_kind != "assembled") {
            throw ParseError("[grid]: h must be constant, affine-x or assembled");
        }
        gc.h0 = get_double(t, "h0", 0.0);
        gc.h_slope = get_double(t, "h_slope", 0.0);
        gc.mean_curv_minus = get_double(t, "mean_curv_minus", 0.0);
        gc.mean_curv_plus = get_double(t, "mean_curv_plus", 0.0);
        gc.collar = static_cast<int>(get_int(t, "collar", 1));
        gc.n = static_cast<int>(get_int(t, "n", 2));
        gc.cells = static_cast<int>(get_int(t, "cells", 0));
        gc.ambient = get_string(t, "ambient", "flat");
        if (gc.ambient != "flat" && gc.ambient != "spherical") {
            throw ParseError("[grid]: ambient must be flat or spherical");
        }
        gc.ambient_kappa = get_double(t, "ambient_kappa", 0.0);
        if (t.count("ambient_center")) {
            gc.ambient_center = get_double(t, "ambient_center", 0.0);
        }
        sc.grid = gc;
    }

    if (doc.has("sweep")) {
        const TomlTable& t = doc.single("sweep");
        check_keys(t, {"n", "kappa", "sigma", "d"}, "sweep");
        SweepConfig sw;
        const TomlValue& ns = need(t, "n", "sweep");
        if (!std::holds_alternative<std::vector<TomlValue>>(ns.v)) {
            throw ParseError("[sweep]: n must be an array");
        }
        for (const auto& v : std::get<std::vector<TomlValue>>(ns.v)) {
            sw.n.push_back(v.as_int());
        }
        sw.kappa = need(t, "kappa", "sweep").as_double_array();
        sw.sigma = t.count("sigma") ? t.at("sigma").as_double_array() : std::vector<double>{0.0};
        sw.d = need(t, "d", "sweep").as_double_array();
        sc.sweep = sw;
    }

    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    return load_scenario(parse_toml_file(path));
}

inline ModelSpace build_model(const ModelConfig& mc, int n) {
    if (mc.family == "spherical") {
        ModelSpace ms = make_spherical(n, mc.kappa, mc.reflected ? -mc.domain_hi : mc.domain_lo,
                                       mc.reflected ? -mc.domain_lo : mc.domain_hi);
        return mc.reflected ? ms.reflect() : ms;
    }
    const double lo = mc.reflected ? -mc.domain_hi : mc.domain_lo;
    const double hi = mc.reflected ? -mc.domain_lo : mc.domain_hi;
    ModelSpace ms = mc.family == "cone" ? make_cone(n, lo, hi)
                                        : make_hyperbolic(n, mc.sigma, lo, hi);
    return mc.reflected ? ms.reflect() : ms;
}

inline std::vector<ModelSpace> build_models(const Scenario& sc) {
    if (!sc.band) throw ParseError("scenario: [band] section required to build models");
    std::vector<ModelSpace> models;
    models.reserve(sc.models.size());
    for (const auto& mc : sc.models) models.push_back(build_model(mc, sc.band->n));
    return models;
}

// Builds the discrete band of a bubble scenario; "assembled" potentials
// pull in the [band]+[models] pipeline and sample the glued h.
inline GridBand build_grid_band(const Scenario& sc) {
    if (!sc.grid) throw ParseError("scenario: [grid] section required");
    const GridConfig& gc = *sc.grid;

    if (gc.mode == "grid-2d") {
        if (gc.h_kind == "assembled") {
            throw ParseError("[grid]: assembled potentials are only supported in warped-1d mode");
        }
        const std::size_t cells =
            static_cast<std::size_t>(gc.nx) * static_cast<std::size_t>(gc.ny);
        std::vector<double> h(cells, 0.0);
        for (int x = 0; x < gc.nx; ++x) {
            const double xc = (x + 0.5) * gc.cell;
            const double value = gc.h_kind == "constant" ? gc.h0 : gc.h0 + gc.h_slope * xc;
            for (int y = 0; y < gc.ny; ++y) {
                h[static_cast<std::size_t>(x) * static_cast<std::size_t>(gc.ny) +
                  static_cast<std::size_t>(y)] = value;
            }
        }
        return GridBand::grid_2d(gc.nx, gc.ny, gc.cell,
                                 gc.topology == "cylinder" ? GridBand::Topology::Cylinder
                                                           : GridBand::Topology::Rectangle,
                                 std::move(h), gc.mean_curv_minus, gc.mean_curv_plus, gc.collar);
    }

    // warped-1d
    if (gc.cells < 4) throw ParseError("[grid]: warped-1d needs cells >= 4");
    double t_begin = 0.0, t_end = 0.0;

    std::function<double(double)> h_fn;
    std::optional<AssembledPotential> assembled;
    if (gc.h_kind == "assembled") {
        if (!sc.band) throw ParseError("scenario: assembled h needs a [band] section");
        const auto models = build_models(sc);
        const double eps =
            sc.eps > 0.0 ? sc.eps : choose_epsilon(*sc.band, models, sc.grid_points);
        assembled.emplace(assemble(*sc.band, models, eps, sc.grid_points));
        t_begin = assembled->domain_min();
        t_end = assembled->domain_max();
        h_fn = [pot = *assembled](double t) { return pot.value(t); };
    } else {
        double total = 0.0;
        if (sc.band) {
            for (const auto& s : sc.band->segments) total += s.width;
        }
        if (!(total > 0.0)) throw ParseError("[grid]: warped-1d needs a [band] with widths");
        t_begin = 0.0;
        t_end = total;
        const double h0 = gc.h0;
        const double slope = gc.h_slope;
        if (gc.h_kind == "constant") {
            h_fn = [h0](double) { return h0; };
        } else {
            h_fn = [h0, slope](double t) { return h0 + slope * t; };
        }
    }

    std::function<double(double)> w_fn, wp_fn;
    if (gc.ambient == "flat") {
        w_fn = [](double) { return 1.0; };
        wp_fn = [](double) { return 0.0; };
    } else {
        const double kap = gc.ambient_kappa;
        if (!(kap > 0.0)) throw ParseError("[grid]: spherical ambient needs ambient_kappa > 0");
        const int n = gc.n;
        const double center = gc.ambient_center.value_or(0.5 * (t_begin + t_end));
        const double rate = std::sqrt(kap) * n / 2.0;
        const double limit = kPi / (std::sqrt(kap) * n);
        if (!(t_begin - center > -limit && t_end - center < limit)) {
            throw ParseError("[grid]: spherical ambient domain touches its singular points");
        }
        w_fn = [rate, center, n](double t) {
            return std::pow(std::cos(rate * (t - center)), 2.0 / n);
        };
        wp_fn = [rate, center, n, w_fn](double t) {
            return w_fn(t) * (-rate * (2.0 / n) * std::tan(rate * (t - center)));
        };
    }

    if (assembled) {
        const std::function<double(double)> h_deriv = [pot = *assembled](double t) {
            return pot.deriv(t);
        };
        return GridBand::warped_1d(gc.n, w_fn, wp_fn, t_begin, t_end, gc.cells, h_fn, &h_deriv);
    }
    return GridBand::warped_1d(gc.n, w_fn, wp_fn, t_begin, t_end, gc.cells, h_fn);
}

} // namespace muband

#endif // MUBAND_SCENARIO_HPP
