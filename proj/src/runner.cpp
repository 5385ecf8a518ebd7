#include "qlbeam/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "qlbeam/error.hpp"
#include "qlbeam/initial.hpp"
#include "qlbeam/output.hpp"
#include "qlbeam/phase_space.hpp"
#include "qlbeam/transforms.hpp"
#include "qlbeam/twm.hpp"

namespace qlbeam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<GaussianPacket> packets_of(const BeamConfig &b) {
    if (b.kind == "gaussian") return {GaussianPacket{b.sigma0, b.x0, b.p0}};
    const double h = 0.5 * b.separation;
    return {GaussianPacket{b.sigma0, b.x0 - h, b.p0}, GaussianPacket{b.sigma0, b.x0 + h, b.p0}};
}

double r3_or_nan(const QuasiDistribution &rho, const PotentialSpec &spec, double eps) {
    const auto r = truncation_ratio(rho, spec, eps, rho.z);
    return r ? *r : kNaN;
}

std::vector<std::size_t> snapshot_steps(const RunConfig &run) {
    std::vector<std::size_t> steps{0};
    for (std::size_t s = 1; s <= run.n_steps; ++s) {
        const bool cadence = run.snapshot_every != 0 && s % run.snapshot_every == 0;
        if (cadence || s == run.n_steps) steps.push_back(s);
    }
    return steps;
}

std::string engine_error(Engine e, const std::exception &err) {
    return std::string(to_string(e)) + ": " + err.what();
}

void check_uncertainty(const EngineRun &run, double eps, std::vector<std::string> &warnings) {
    for (const auto &m : run.moments) {
        if (!uncertainty_check(m, eps).satisfied) {
            warnings.push_back(std::string(to_string(run.engine)) + ": sigma_x sigma_p below eps/2 at z = " +
                               format_number(m.z) + " (grid truncation?)");
            return;
        }
    }
}

EngineRun run_grid_engine(Engine engine, const QuasiDistribution &start, const PotentialSpec &spec,
                          double eps, const StepPlan &plan, std::size_t snapshot_every) {
    EngineRun out{engine, {}, {}, {}, {}, std::nullopt, 0.0};
    out.negativity_volume.push_back(negativity(start).negativity_volume);
    out.r3.push_back(r3_or_nan(start, spec, eps));
    auto traj = evolve_phase_space(start, spec, eps, plan, snapshot_every,
                                   [&](std::size_t, const QuasiDistribution &rho) {
                                       out.negativity_volume.push_back(negativity(rho).negativity_volume);
                                       out.r3.push_back(r3_or_nan(rho, spec, eps));
                                   });
    out.moments = std::move(traj.moments);
    out.final_negativity = negativity(traj.final_state());
    out.snapshots = std::move(traj.snapshots);
    return out;
}

EngineRun run_twm(const WaveField &psi, const PhaseGrid &grid, const PotentialSpec &spec,
                  const StepPlan &plan, const RunConfig &cfg) {
    EngineRun out{Engine::twm, {}, {}, {}, {}, std::nullopt, 0.0};
    auto traj = evolve_twm(psi, spec, plan, cfg.snapshot_every);
    out.moments = std::move(traj.moments);
    out.negativity_volume.assign(out.moments.size(), kNaN);
    out.r3.assign(out.moments.size(), kNaN);
    const auto steps = snapshot_steps(cfg);
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        QuasiDistribution w = [&] {
            try {
                return wigner_transform(traj.snapshots[k], grid.p, cfg.marginal_tolerance);
            } catch (const Error &e) {
                throw Error(e.kind(), "step " + std::to_string(steps[k]) + ": " + e.what());
            }
        }();
        out.negativity_volume[steps[k]] = negativity(w).negativity_volume;
        out.r3[steps[k]] = r3_or_nan(w, spec, psi.epsilon);
        out.snapshots.push_back(std::move(w));
    }
    out.final_negativity = negativity(out.snapshots.back());
    return out;
}

EngineRun run_rays(const QuasiDistribution &source, const PotentialSpec &spec, const StepPlan &plan,
                   const RunConfig &cfg, std::vector<std::string> &warnings) {
    EngineRun out{Engine::rays, {}, {}, {}, {}, std::nullopt, 0.0};
    const auto rays = sample_rays(source, cfg.ray_count, cfg.seed);
    if (rays.clipped_mass > 0.0) {
        warnings.push_back("rays: clipped negative mass " + format_number(rays.clipped_mass) +
                           " while sampling");
    }
    auto traj = trace_rays(rays, spec, plan, cfg.snapshot_every);
    if (const auto lost = traj.final_state().lost_count(); lost > 0) {
        warnings.push_back("rays: " + std::to_string(lost) + " rays lost to non-finite coordinates");
    }
    out.moments = std::move(traj.moments);
    out.negativity_volume.assign(out.moments.size(), kNaN);
    out.r3.assign(out.moments.size(), kNaN);
    return out;
}

nlohmann::json moments_json(const BeamMoments &m) {
    return {{"z", m.z},           {"mean_x", m.mean_x},   {"mean_p", m.mean_p},
            {"sigma_x", m.sigma_x}, {"sigma_p", m.sigma_p}, {"sigma_xp", m.sigma_xp},
            {"emittance", m.emittance_rms}};
}

nlohmann::json number_json(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

const EngineRun *RunReport::find(Engine e) const {
    for (const auto &run : engines) {
        if (run.engine == e) return &run;
    }
    return nullptr;
}

InitialStates build_initial_states(const ScenarioConfig &config) {
    const PhaseGrid grid = config.phase_grid();
    const double eps = config.epsilon();
    const auto packets = packets_of(config.beam);

    std::vector<GaussianComponent> components;
    for (const auto &pk : packets) {
        components.push_back(GaussianComponent{1.0, pk.sigma_x, eps / (2.0 * pk.sigma_x), 0.0, pk.x0, pk.p0});
    }
    QuasiDistribution mixture = gaussian_mixture_quasidist(grid, components);

    const bool pure = config.beam.kind == "gaussian" || config.beam.coherent;
    if (!pure) {
        return InitialStates{std::nullopt, mixture, mixture};
    }
    WaveField psi = superposed_wavefield(grid.x, packets, eps);
    QuasiDistribution w = wigner_transform(psi, grid.p, config.run.marginal_tolerance);
    return InitialStates{std::move(psi), std::move(w), std::move(mixture)};
}

RunReport run_scenario(const ScenarioConfig &config) {
    RunReport report;
    report.epsilon = config.epsilon();
    const double eps = report.epsilon;
    const auto spec = config.potential_spec();
    const PhaseGrid grid = config.phase_grid();
    const auto init = build_initial_states(config);

    if (config.paraxial_warning()) {
        report.warnings.push_back("physics: vth_over_c = " + format_number(*config.physics.vth_over_c) +
                                  " exceeds 0.1, paraxial assumption is weak");
    }

    report.settings = {
        {"grid.nx", std::to_string(config.grid.nx)},
        {"grid.np", std::to_string(config.grid.np)},
        {"physics.epsilon", format_number(eps)},
        {"run.dz", format_number(config.run.dz)},
        {"run.n_steps", std::to_string(config.run.n_steps)},
        {"run.snapshot_every", std::to_string(config.run.snapshot_every)},
        {"run.seed", std::to_string(config.run.seed)},
        {"run.ray_count", std::to_string(config.run.ray_count)},
        {"run.marginal_tolerance", format_number(config.run.marginal_tolerance)},
        {"rng", kRngAlgorithm},
        {"boundary_decay", format_number(kBoundaryDecay)},
        {"negative_mass_limit", format_number(kNegativeMassLimit)},
        {"normalization_tolerance", format_number(kNormalizationTolerance)},
        {"imaginary_residue_limit", format_number(kImaginaryResidueLimit)},
        {"uncertainty_slack", "1e-9"},
        {"output.directory", config.output.directory},
    };

    for (Engine engine : config.run.engines) {
        const auto t0 = std::chrono::steady_clock::now();
        EngineRun run;
        try {
            switch (engine) {
                case Engine::moyal:
                    run = run_grid_engine(engine, init.phase_state, spec, eps,
                                          StepPlan{config.run.dz, config.run.n_steps, GeneratorMode::full()},
                                          config.run.snapshot_every);
                    break;
                case Engine::liouville:
                    run = run_grid_engine(engine, init.phase_state, spec, eps,
                                          StepPlan{config.run.dz, config.run.n_steps, GeneratorMode::truncated(1)},
                                          config.run.snapshot_every);
                    break;
                case Engine::twm:
                    run = run_twm(*init.psi, grid, spec, StepPlan{config.run.dz, config.run.n_steps}, config.run);
                    break;
                case Engine::rays:
                    run = run_rays(init.classical_analogue, spec, StepPlan{config.run.dz, config.run.n_steps},
                                   config.run, report.warnings);
                    break;
            }
        } catch (const Error &e) {
            throw RunError(engine_error(engine, e));
        }
        run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        // Ray moments are Monte-Carlo estimates and may dip below the bound by sampling noise.
        if (engine != Engine::rays) check_uncertainty(run, eps, report.warnings);
        report.engines.push_back(std::move(run));
    }

    const Engine grid_engines[] = {Engine::twm, Engine::moyal, Engine::liouville};
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            const auto *ra = report.find(grid_engines[a]);
            const auto *rb = report.find(grid_engines[b]);
            if (!ra || !rb) continue;
            EngineDistance d{grid_engines[a], grid_engines[b], {}, {}};
            for (std::size_t k = 0; k < ra->snapshots.size(); ++k) {
                d.z.push_back(ra->snapshots[k].z);
                d.linf.push_back(linf_distance(ra->snapshots[k], rb->snapshots[k]));
            }
            report.distances.push_back(std::move(d));
        }
    }
    return report;
}

void emit_outputs(const RunReport &report, const ScenarioConfig &config,
                  const std::filesystem::path &directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw Error(ErrorKind::io_error, directory.string() + ": " + ec.message());

    auto wants = [&](OutputFormat f) {
        for (auto g : config.output.formats) {
            if (g == f) return true;
        }
        return false;
    };

    for (const auto &run : report.engines) {
        const std::string name(to_string(run.engine));
        if (wants(OutputFormat::csv)) {
            std::vector<MomentRow> rows;
            for (std::size_t k = 0; k < run.moments.size(); ++k) {
                rows.push_back({run.moments[k], run.negativity_volume[k], run.r3[k]});
            }
            write_moment_csv(directory / (name + "_moments.csv"), rows);
        }
        for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
            char stem[64];
            std::snprintf(stem, sizeof stem, "%s_%04zu", name.c_str(), k);
            if (wants(OutputFormat::grid_dump)) {
                write_grid_dump(directory / (std::string(stem) + ".mbgd"), run.snapshots[k], report.epsilon);
            }
            if (wants(OutputFormat::heatmap)) {
                write_heatmap(directory / (std::string(stem) + ".pgm"), run.snapshots[k]);
            }
        }
    }

    if (wants(OutputFormat::csv) && !report.distances.empty()) {
        std::string out = "a,b,z,linf\n";
        for (const auto &d : report.distances) {
            for (std::size_t k = 0; k < d.z.size(); ++k) {
                out += std::string(to_string(d.a)) + "," + std::string(to_string(d.b)) + "," +
                       format_number(d.z[k]) + "," + format_number(d.linf[k]) + "\n";
            }
        }
        std::ofstream f(directory / "distances.csv", std::ios::binary | std::ios::trunc);
        if (!(f << out)) throw Error(ErrorKind::io_error, (directory / "distances.csv").string() + ": write failed");
    }

    nlohmann::json j;
    j["epsilon"] = report.epsilon;
    j["warnings"] = report.warnings;
    for (const auto &[k, v] : report.settings) j["settings"][k] = v;
    for (const auto &run : report.engines) {
        nlohmann::json e;
        e["engine"] = std::string(to_string(run.engine));
        e["wall_seconds"] = run.wall_seconds;
        e["steps"] = run.moments.empty() ? 0 : run.moments.size() - 1;
        e["initial"] = moments_json(run.moments.front());
        e["final"] = moments_json(run.moments.back());
        e["final_r3"] = number_json(run.r3.back());
        if (run.final_negativity) {
            e["final_negativity"] = {{"min_value", run.final_negativity->min_value},
                                     {"negative_mass", run.final_negativity->negative_mass},
                                     {"negativity_volume", run.final_negativity->negativity_volume}};
        }
        j["engines"].push_back(e);
    }
    for (const auto &d : report.distances) {
        j["distances"].push_back({{"a", std::string(to_string(d.a))},
                                  {"b", std::string(to_string(d.b))},
                                  {"z", d.z},
                                  {"linf", d.linf}});
    }
    std::ofstream f(directory / "report.json", std::ios::trunc);
    if (!(f << j.dump(2) << '\n')) {
        throw Error(ErrorKind::io_error, (directory / "report.json").string() + ": write failed");
    }
}

}  // namespace qlbeam
