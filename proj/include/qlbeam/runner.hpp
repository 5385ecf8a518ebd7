#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/scenario.hpp"
#include "qlbeam/state.hpp"

namespace qlbeam {

/// Starting states derived from a scenario. `psi` exists for pure beams,
/// `phase_state` seeds the grid engines (Wigner transform of psi, or the packet
/// mixture for incoherent beams) and `classical_analogue` is the non-negative
/// packet mixture the ray engine samples from.
struct InitialStates {
    std::optional<WaveField> psi;
    QuasiDistribution phase_state;
    QuasiDistribution classical_analogue;
};

InitialStates build_initial_states(const ScenarioConfig &config);

/// Per-engine record. Grid-derived columns are NaN where an engine has no
/// such quantity (rays) or only computes it at snapshots (twm, via its Wigner
/// transform).
struct EngineRun {
    Engine engine;
    std::vector<BeamMoments> moments;
    std::vector<double> negativity_volume;
    std::vector<double> r3;
    /// Phase-space snapshots: the state itself for grid engines, the Wigner
    /// transform of psi for twm, empty for rays.
    std::vector<QuasiDistribution> snapshots;
    std::optional<NegativityReport> final_negativity;
    double wall_seconds = 0.0;
};

struct EngineDistance {
    Engine a;
    Engine b;
    std::vector<double> z;
    std::vector<double> linf;
};

struct RunReport {
    double epsilon = 0.0;
    std::vector<EngineRun> engines;
    std::vector<EngineDistance> distances;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> settings;  ///< defaults and tolerances in force

    const EngineRun *find(Engine e) const;
};

/// Thrown when a solver fails mid-run; the message names engine and step.
class RunError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

RunReport run_scenario(const ScenarioConfig &config);

/// Writes CSV moment series, MBGD grid dumps, PGM heatmaps (per the config's
/// formats) plus report.json into `directory`.
void emit_outputs(const RunReport &report, const ScenarioConfig &config,
                  const std::filesystem::path &directory);

}  // namespace qlbeam
