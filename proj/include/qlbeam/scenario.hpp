#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlbeam/grid.hpp"
#include "qlbeam/potentials.hpp"

namespace qlbeam {

enum class Engine { moyal, liouville, twm, rays };
enum class OutputFormat { csv, grid_dump, heatmap };

std::string_view to_string(Engine e);
std::string_view to_string(OutputFormat f);

/// Environment variable that replaces the built-in output directory default.
inline constexpr const char *kOutputDirEnv = "QLBEAM_OUTPUT_DIR";
inline constexpr const char *kDefaultOutputDir = "qlbeam-out";

struct GridConfig {
    std::size_t nx = 0;
    std::size_t np = 0;
    double x_length = 0.0;
    double p_length = 0.0;
    double x_center = 0.0;
    double p_center = 0.0;
};

struct BeamConfig {
    std::string kind = "gaussian";  // gaussian | superposition
    double sigma0 = 0.0;
    double x0 = 0.0;
    double p0 = 0.0;
    double separation = 0.0;
    /// Superposition only: false replaces the pure state by the equal-weight
    /// mixture of its two packets (no interference term).
    bool coherent = true;
};

struct PhysicsConfig {
    std::optional<double> epsilon;
    std::optional<double> vth_over_c;
    std::optional<double> sigma0;
};

struct PotentialConfig {
    std::string preset = "free_space";  // free_space | linear_lens | quartic | custom
    double K = 1.0;
    double lambda = 0.0;
    std::vector<std::pair<int, double>> coefficients;  // custom: power -> c_k
    std::string profile = "constant";                  // constant | lattice | harmonic
    std::vector<double> lattice_lengths;
    std::vector<double> lattice_factors;
    double harmonic_omega = 0.0;
    double harmonic_phase = 0.0;
};

struct RunConfig {
    double dz = 0.0;
    std::size_t n_steps = 0;
    std::size_t snapshot_every = 0;  // 0: initial and final only
    std::vector<Engine> engines{Engine::moyal, Engine::twm};
    std::size_t ray_count = 100000;
    std::uint64_t seed = 1;
    double marginal_tolerance = 1e-10;
};

struct OutputConfig {
    std::string directory;
    std::vector<OutputFormat> formats{OutputFormat::csv};
};

struct ScenarioConfig {
    GridConfig grid;
    BeamConfig beam;
    PhysicsConfig physics;
    PotentialConfig potential;
    RunConfig run;
    OutputConfig output;

    double epsilon() const;
    /// v_th/c > 0.1 when the thermal pair was given.
    bool paraxial_warning() const;
    PhaseGrid phase_grid() const;
    PotentialSpec potential_spec() const;
    bool has_engine(Engine e) const;
};

/// Thrown by load/parse/validate; `line` is 0 when only a key is known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, std::size_t line, const std::string &what)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}
    const std::string &key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

  private:
    std::string key_;
    std::size_t line_;
};

ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path &path);

/// Checks every precondition the solvers will enforce (grid sizes, boundary
/// decay, kick and kinetic phase limits, Wigner marginals) without running.
void validate_scenario(const ScenarioConfig &config);

/// Canonical text with every key spelled out, loadable by parse_scenario.
std::string to_text(const ScenarioConfig &config);

}  // namespace qlbeam
