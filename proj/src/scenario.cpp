#include "qlbeam/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/error.hpp"
#include "qlbeam/runner.hpp"

namespace qlbeam {

namespace pt = boost::property_tree;

std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::moyal: return "moyal";
        case Engine::liouville: return "liouville";
        case Engine::twm: return "twm";
        case Engine::rays: return "rays";
    }
    return "?";
}

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::grid_dump: return "grid-dump";
        case OutputFormat::heatmap: return "heatmap";
    }
    return "?";
}

namespace {

const std::map<std::string, std::set<std::string>> &known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"nx", "np", "x_length", "p_length", "x_center", "p_center"}},
        {"beam", {"kind", "sigma0", "x0", "p0", "separation", "coherent"}},
        {"physics", {"epsilon", "vth_over_c", "sigma0"}},
        {"potential",
         {"preset", "K", "lambda", "coefficients", "profile", "lattice_lengths", "lattice_factors",
          "harmonic_omega", "harmonic_phase"}},
        {"run",
         {"dz", "n_steps", "snapshot_every", "engines", "ray_count", "seed", "marginal_tolerance"}},
        {"output", {"directory", "formats"}},
    };
    return keys;
}

[[noreturn]] void fail(const std::string &key, const std::string &msg) {
    throw ConfigError(key, 0, key.empty() ? msg : key + ": " + msg);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

double parse_double(const std::string &key, const std::string &text) {
    const char *begin = text.c_str();
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) fail(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(key, "expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail(key, "expected true or false, got '" + text + "'");
}

/// Maps "section.key" to the line it was written on, for error messages.
std::map<std::string, std::size_t> key_lines(std::string_view text) {
    std::map<std::string, std::size_t> lines;
    std::string section;
    std::size_t n = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++n;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq != std::string::npos) lines[section + "." + trim(std::string_view(t).substr(0, eq))] = n;
    }
    return lines;
}

class Reader {
  public:
    explicit Reader(const pt::ptree &tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string &key) const {
        auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!v) return std::nullopt;
        return trim(*v);
    }
    std::string required(const std::string &key) const {
        auto v = raw(key);
        if (!v) fail(key, "required key is missing");
        return *v;
    }
    double number(const std::string &key) const { return parse_double(key, required(key)); }
    void number(const std::string &key, double &out) const {
        if (auto v = raw(key)) out = parse_double(key, *v);
    }
    std::optional<double> optional_number(const std::string &key) const {
        if (auto v = raw(key)) return parse_double(key, *v);
        return std::nullopt;
    }
    std::size_t count(const std::string &key) const { return parse_unsigned(key, required(key)); }
    void count(const std::string &key, std::size_t &out) const {
        if (auto v = raw(key)) out = parse_unsigned(key, *v);
    }

  private:
    const pt::ptree &tree_;
};

std::vector<double> parse_number_list(const std::string &key, const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split_list(text)) out.push_back(parse_double(key, item));
    return out;
}

std::string join_numbers(const std::vector<double> &v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v[k]);
        out += (k ? ", " : "") + std::string(buf);
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double coefficient_bound(const CoefficientProfile &p) {
    if (const auto *c = std::get_if<ConstantProfile>(&p)) return std::abs(c->value);
    if (const auto *h = std::get_if<HarmonicProfile>(&p)) return std::abs(h->amplitude);
    double m = 0.0;
    for (double v : std::get<LatticeProfile>(p).values) m = std::max(m, std::abs(v));
    return m;
}

/// max |dz G| over the grid; for z-dependent potentials an upper bound built
/// from the largest coefficient magnitudes at the grid corner.
double kick_phase_bound(const PotentialSpec &spec, const PhaseGrid &grid, double eps, double dz,
                        int order) {
    if (spec.is_z_independent()) {
        const auto u = spec.at(0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            for (std::size_t m = 0; m < grid.p.size(); ++m) {
                worst = std::max(worst, std::abs(dz * u.generator(grid.x.point(i),
                                                                  grid.p.frequency(m), eps, order)));
            }
        }
        return worst;
    }
    std::vector<double> c(static_cast<std::size_t>(spec.degree()) + 1, 0.0);
    for (const auto &t : spec.terms()) c[static_cast<std::size_t>(t.power)] = coefficient_bound(t.coefficient);
    const double X = std::max(std::abs(grid.x.first()),
                              std::abs(grid.x.point(grid.x.size() - 1)));
    const double Y = grid.p.nyquist();
    return dz * FrozenPotential(std::move(c)).generator(X, Y, eps, order);
}

}  // namespace

double ScenarioConfig::epsilon() const {
    if (physics.epsilon) return *physics.epsilon;
    return emittance_from_thermal(*physics.vth_over_c, *physics.sigma0).epsilon;
}

bool ScenarioConfig::paraxial_warning() const {
    return !physics.epsilon && physics.vth_over_c && *physics.vth_over_c > 0.1;
}

PhaseGrid ScenarioConfig::phase_grid() const {
    return PhaseGrid{AxisGrid(grid.nx, grid.x_length, grid.x_center),
                     AxisGrid(grid.np, grid.p_length, grid.p_center)};
}

PotentialSpec ScenarioConfig::potential_spec() const {
    std::vector<std::pair<int, double>> base;
    if (potential.preset == "linear_lens") {
        base = {{2, 0.5 * potential.K}};
    } else if (potential.preset == "quartic") {
        base = {{2, 0.5 * potential.K}, {4, potential.lambda}};
    } else if (potential.preset == "custom") {
        base = potential.coefficients;
    }
    std::vector<PotentialTerm> terms;
    for (const auto &[power, c] : base) {
        CoefficientProfile profile = ConstantProfile{c};
        if (potential.profile == "lattice") {
            std::vector<double> values;
            for (double f : potential.lattice_factors) values.push_back(c * f);
            profile = LatticeProfile{potential.lattice_lengths, values, 0.0};
        } else if (potential.profile == "harmonic") {
            profile = HarmonicProfile{c, potential.harmonic_omega, potential.harmonic_phase};
        }
        terms.push_back({power, profile});
    }
    return PotentialSpec(std::move(terms));
}

bool ScenarioConfig::has_engine(Engine e) const {
    return std::find(run.engines.begin(), run.engines.end(), e) != run.engines.end();
}

ScenarioConfig parse_scenario(std::string_view text) {
    const auto lines = key_lines(text);
    auto with_line = [&](const ConfigError &e) {
        const auto it = lines.find(e.key());
        const std::size_t line = e.line() ? e.line() : (it == lines.end() ? 0 : it->second);
        const std::string prefix = line ? "line " + std::to_string(line) + ": " : "";
        return ConfigError(e.key(), line, prefix + e.what());
    };

    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError("", e.line(), "line " + std::to_string(e.line()) + ": " + e.message());
    }

    ScenarioConfig cfg;
    try {
        for (const auto &[section, body] : tree) {
            const auto it = known_keys().find(section);
            if (it == known_keys().end()) fail(section, "unknown section");
            for (const auto &[key, value] : body) {
                if (!it->second.count(key)) fail(section + "." + key, "unknown key");
            }
        }
        const Reader r(tree);

        cfg.grid.nx = r.count("grid.nx");
        cfg.grid.np = r.count("grid.np");
        cfg.grid.x_length = r.number("grid.x_length");
        cfg.grid.p_length = r.number("grid.p_length");
        r.number("grid.x_center", cfg.grid.x_center);
        r.number("grid.p_center", cfg.grid.p_center);

        if (auto v = r.raw("beam.kind")) cfg.beam.kind = *v;
        cfg.beam.sigma0 = r.number("beam.sigma0");
        r.number("beam.x0", cfg.beam.x0);
        r.number("beam.p0", cfg.beam.p0);
        r.number("beam.separation", cfg.beam.separation);
        if (auto v = r.raw("beam.coherent")) cfg.beam.coherent = parse_bool("beam.coherent", *v);

        cfg.physics.epsilon = r.optional_number("physics.epsilon");
        cfg.physics.vth_over_c = r.optional_number("physics.vth_over_c");
        cfg.physics.sigma0 = r.optional_number("physics.sigma0");

        if (auto v = r.raw("potential.preset")) cfg.potential.preset = *v;
        r.number("potential.K", cfg.potential.K);
        r.number("potential.lambda", cfg.potential.lambda);
        if (auto v = r.raw("potential.coefficients")) {
            for (const auto &item : split_list(*v)) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) {
                    fail("potential.coefficients", "expected power:value pairs, got '" + item + "'");
                }
                const auto power = parse_unsigned("potential.coefficients", trim(item.substr(0, colon)));
                cfg.potential.coefficients.emplace_back(
                    static_cast<int>(power), parse_double("potential.coefficients", trim(item.substr(colon + 1))));
            }
        }
        if (auto v = r.raw("potential.profile")) cfg.potential.profile = *v;
        if (auto v = r.raw("potential.lattice_lengths")) {
            cfg.potential.lattice_lengths = parse_number_list("potential.lattice_lengths", *v);
        }
        if (auto v = r.raw("potential.lattice_factors")) {
            cfg.potential.lattice_factors = parse_number_list("potential.lattice_factors", *v);
        }
        r.number("potential.harmonic_omega", cfg.potential.harmonic_omega);
        r.number("potential.harmonic_phase", cfg.potential.harmonic_phase);

        cfg.run.dz = r.number("run.dz");
        cfg.run.n_steps = r.count("run.n_steps");
        r.count("run.snapshot_every", cfg.run.snapshot_every);
        if (auto v = r.raw("run.engines")) {
            std::set<Engine> chosen;
            for (const auto &name : split_list(*v)) {
                if (name == "moyal") chosen.insert(Engine::moyal);
                else if (name == "liouville") chosen.insert(Engine::liouville);
                else if (name == "twm") chosen.insert(Engine::twm);
                else if (name == "rays") chosen.insert(Engine::rays);
                else fail("run.engines", "unknown engine '" + name + "'");
            }
            cfg.run.engines.assign(chosen.begin(), chosen.end());
        }
        r.count("run.ray_count", cfg.run.ray_count);
        if (auto v = r.raw("run.seed")) cfg.run.seed = parse_unsigned("run.seed", *v);
        r.number("run.marginal_tolerance", cfg.run.marginal_tolerance);

        if (auto v = r.raw("output.directory")) {
            cfg.output.directory = *v;
        } else if (const char *env = std::getenv(kOutputDirEnv); env && *env) {
            cfg.output.directory = env;
        } else {
            cfg.output.directory = kDefaultOutputDir;
        }
        if (auto v = r.raw("output.formats")) {
            std::set<OutputFormat> chosen;
            for (const auto &name : split_list(*v)) {
                if (name == "csv") chosen.insert(OutputFormat::csv);
                else if (name == "grid-dump") chosen.insert(OutputFormat::grid_dump);
                else if (name == "heatmap") chosen.insert(OutputFormat::heatmap);
                else fail("output.formats", "unknown format '" + name + "'");
            }
            cfg.output.formats.assign(chosen.begin(), chosen.end());
        }

        validate_scenario(cfg);
    } catch (const ConfigError &e) {
        throw with_line(e);
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot read scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ConfigError &e) {
        throw ConfigError(e.key(), e.line(), path.string() + ": " + e.what());
    }
}

void validate_scenario(const ScenarioConfig &cfg) {
    const auto &g = cfg.grid;
    if (g.nx < 8 || !is_power_of_two(g.nx)) fail("grid.nx", "must be a power of two >= 8");
    if (g.np < 8 || !is_power_of_two(g.np)) fail("grid.np", "must be a power of two >= 8");
    if (!(g.x_length > 0.0)) fail("grid.x_length", "must be positive");
    if (!(g.p_length > 0.0)) fail("grid.p_length", "must be positive");

    const auto &b = cfg.beam;
    if (b.kind != "gaussian" && b.kind != "superposition") {
        fail("beam.kind", "must be gaussian or superposition");
    }
    if (!(b.sigma0 > 0.0)) fail("beam.sigma0", "must be positive");
    if (b.kind == "superposition" && !(b.separation > 0.0)) {
        fail("beam.separation", "must be positive for a superposition");
    }
    const bool pure = b.kind == "gaussian" || b.coherent;

    const auto &ph = cfg.physics;
    const bool thermal = ph.vth_over_c.has_value() || ph.sigma0.has_value();
    if (ph.epsilon && thermal) {
        fail("physics.epsilon", "give either epsilon or (vth_over_c, sigma0), not both");
    }
    if (!ph.epsilon && !thermal) fail("physics.epsilon", "give epsilon or (vth_over_c, sigma0)");
    if (ph.epsilon && !(*ph.epsilon > 0.0)) fail("physics.epsilon", "must be positive");
    if (thermal) {
        if (!ph.vth_over_c) fail("physics.vth_over_c", "required together with physics.sigma0");
        if (!ph.sigma0) fail("physics.sigma0", "required together with physics.vth_over_c");
        if (!(*ph.vth_over_c > 0.0)) fail("physics.vth_over_c", "must be positive");
        if (!(*ph.sigma0 > 0.0)) fail("physics.sigma0", "must be positive");
    }

    const auto &pot = cfg.potential;
    if (pot.preset != "free_space" && pot.preset != "linear_lens" && pot.preset != "quartic" &&
        pot.preset != "custom") {
        fail("potential.preset", "must be free_space, linear_lens, quartic or custom");
    }
    if (pot.preset == "custom" && pot.coefficients.empty()) {
        fail("potential.coefficients", "required for the custom preset");
    }
    if (pot.profile != "constant" && pot.profile != "lattice" && pot.profile != "harmonic") {
        fail("potential.profile", "must be constant, lattice or harmonic");
    }
    if (pot.profile == "lattice" &&
        (pot.lattice_lengths.empty() || pot.lattice_lengths.size() != pot.lattice_factors.size())) {
        fail("potential.lattice_lengths", "lattice needs equally long lattice_lengths and lattice_factors");
    }

    const auto &run = cfg.run;
    if (!(run.dz > 0.0)) fail("run.dz", "must be positive");
    if (run.engines.empty()) fail("run.engines", "at least one engine is required");
    if (cfg.has_engine(Engine::twm) && !pure) {
        fail("run.engines", "twm needs a pure beam; set beam.coherent = true");
    }
    if (cfg.has_engine(Engine::rays) && run.ray_count < 2) fail("run.ray_count", "must be at least 2");
    if (!(run.marginal_tolerance > 0.0)) fail("run.marginal_tolerance", "must be positive");
    if (cfg.output.formats.empty()) fail("output.formats", "at least one format is required");

    PotentialSpec spec;
    try {
        spec = cfg.potential_spec();
    } catch (const Error &e) {
        fail("potential.coefficients", e.what());
    }
    const double eps = cfg.epsilon();
    const PhaseGrid grid = cfg.phase_grid();

    try {
        build_initial_states(cfg);
    } catch (const Error &e) {
        switch (e.kind()) {
            case ErrorKind::grid_too_narrow: fail("grid.x_length", e.what());
            case ErrorKind::p_axis_too_coarse: fail("grid.p_length", e.what());
            default: fail("beam", e.what());
        }
    }

    const double limit = std::numbers::pi;
    if (cfg.has_engine(Engine::moyal) && !(kick_phase_bound(spec, grid, eps, run.dz, -1) < limit)) {
        fail("run.dz", "moyal kick phase max |dz G| reaches pi on this grid");
    }
    if (cfg.has_engine(Engine::liouville) && !(kick_phase_bound(spec, grid, eps, run.dz, 1) < limit)) {
        fail("run.dz", "liouville kick phase max |dz G| reaches pi on this grid");
    }
    if (cfg.has_engine(Engine::twm)) {
        const double kmax = grid.x.nyquist();
        if (!(0.5 * eps * kmax * kmax * run.dz < limit)) {
            fail("run.dz", "twm kinetic phase eps k_max^2 dz / 2 reaches pi on this grid");
        }
    }
}

std::string to_text(const ScenarioConfig &c) {
    std::ostringstream out;
    out << "[grid]\n"
        << "nx = " << c.grid.nx << "\n"
        << "np = " << c.grid.np << "\n"
        << "x_length = " << num(c.grid.x_length) << "\n"
        << "p_length = " << num(c.grid.p_length) << "\n"
        << "x_center = " << num(c.grid.x_center) << "\n"
        << "p_center = " << num(c.grid.p_center) << "\n\n";
    out << "[beam]\n"
        << "kind = " << c.beam.kind << "\n"
        << "sigma0 = " << num(c.beam.sigma0) << "\n"
        << "x0 = " << num(c.beam.x0) << "\n"
        << "p0 = " << num(c.beam.p0) << "\n"
        << "separation = " << num(c.beam.separation) << "\n"
        << "coherent = " << (c.beam.coherent ? "true" : "false") << "\n\n";
    out << "[physics]\n";
    if (c.physics.epsilon) out << "epsilon = " << num(*c.physics.epsilon) << "\n";
    if (c.physics.vth_over_c) out << "vth_over_c = " << num(*c.physics.vth_over_c) << "\n";
    if (c.physics.sigma0) out << "sigma0 = " << num(*c.physics.sigma0) << "\n";
    out << "\n[potential]\n"
        << "preset = " << c.potential.preset << "\n"
        << "K = " << num(c.potential.K) << "\n"
        << "lambda = " << num(c.potential.lambda) << "\n";
    if (!c.potential.coefficients.empty()) {
        out << "coefficients = ";
        for (std::size_t k = 0; k < c.potential.coefficients.size(); ++k) {
            out << (k ? ", " : "") << c.potential.coefficients[k].first << ":"
                << num(c.potential.coefficients[k].second);
        }
        out << "\n";
    }
    out << "profile = " << c.potential.profile << "\n";
    if (!c.potential.lattice_lengths.empty()) {
        out << "lattice_lengths = " << join_numbers(c.potential.lattice_lengths) << "\n"
            << "lattice_factors = " << join_numbers(c.potential.lattice_factors) << "\n";
    }
    out << "harmonic_omega = " << num(c.potential.harmonic_omega) << "\n"
        << "harmonic_phase = " << num(c.potential.harmonic_phase) << "\n\n";
    out << "[run]\n"
        << "dz = " << num(c.run.dz) << "\n"
        << "n_steps = " << c.run.n_steps << "\n"
        << "snapshot_every = " << c.run.snapshot_every << "\n"
        << "engines = ";
    for (std::size_t k = 0; k < c.run.engines.size(); ++k) {
        out << (k ? ", " : "") << to_string(c.run.engines[k]);
    }
    out << "\n"
        << "ray_count = " << c.run.ray_count << "\n"
        << "seed = " << c.run.seed << "\n"
        << "marginal_tolerance = " << num(c.run.marginal_tolerance) << "\n\n";
    out << "[output]\n"
        << "directory = " << c.output.directory << "\n"
        << "formats = ";
    for (std::size_t k = 0; k < c.output.formats.size(); ++k) {
        out << (k ? ", " : "") << to_string(c.output.formats[k]);
    }
    out << "\n";
    return out.str();
}

}  // namespace qlbeam
