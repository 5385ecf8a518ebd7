// Command-line front end: run, compare, validate, info.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qlbeam/error.hpp"
#include "qlbeam/output.hpp"
#include "qlbeam/runner.hpp"
#include "qlbeam/scenario.hpp"
#include "qlbeam/transforms.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Options {
    std::string scenario;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool quiet = false;
};

qlbeam::ScenarioConfig load(const Options &opt) {
    auto cfg = qlbeam::load_scenario(opt.scenario);
    if (!opt.output_dir.empty()) cfg.output.directory = opt.output_dir;
    if (opt.seed_given) cfg.run.seed = opt.seed;
    return cfg;
}

int do_run(const Options &opt, bool compare) {
    auto cfg = load(opt);
    if (compare) {
        cfg.run.engines = {qlbeam::Engine::moyal, qlbeam::Engine::liouville, qlbeam::Engine::twm};
        qlbeam::validate_scenario(cfg);
    }
    const auto report = qlbeam::run_scenario(cfg);
    qlbeam::emit_outputs(report, cfg, cfg.output.directory);
    if (opt.quiet) return 0;

    std::printf("epsilon %s, output in %s\n", qlbeam::format_number(report.epsilon).c_str(),
                cfg.output.directory.c_str());
    for (const auto &run : report.engines) {
        const auto &m = run.moments.back();
        std::printf("%-9s z=%-8g sigma_x=%.10g sigma_p=%.10g emittance=%.10g  (%.2fs)\n",
                    std::string(qlbeam::to_string(run.engine)).c_str(), m.z, m.sigma_x, m.sigma_p,
                    m.emittance_rms, run.wall_seconds);
        if (run.final_negativity) {
            std::printf("          negativity_volume=%.6g min=%.6g\n",
                        run.final_negativity->negativity_volume, run.final_negativity->min_value);
        }
    }
    for (const auto &d : report.distances) {
        std::printf("linf %s-%s at z=%g: %.6g\n", std::string(qlbeam::to_string(d.a)).c_str(),
                    std::string(qlbeam::to_string(d.b)).c_str(), d.z.back(), d.linf.back());
    }
    for (const auto &w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return 0;
}

int do_validate(const Options &opt) {
    const auto cfg = load(opt);
    if (!opt.quiet) std::cout << qlbeam::to_text(cfg);
    return 0;
}

int do_info(const std::string &path) {
    const auto dump = qlbeam::read_grid_dump(path);
    const auto &g = dump.state.grid;
    double lo = dump.state.values.front();
    double hi = lo;
    for (double v : dump.state.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::printf("version   %u\n", dump.version);
    std::printf("grid      %zu x %zu\n", g.x.size(), g.p.size());
    std::printf("x axis    length %.17g center %.17g\n", g.x.length(), g.x.center());
    std::printf("p axis    length %.17g center %.17g\n", g.p.length(), g.p.center());
    std::printf("z         %.17g\n", dump.state.z);
    std::printf("epsilon   %.17g\n", dump.epsilon);
    std::printf("mass      %.17g\n", qlbeam::mass(dump.state));
    std::printf("range     [%.17g, %.17g]\n", lo, hi);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phase-space beam propagation: TWM, Moyal, Liouville and ray engines"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("scenario", opt.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--output-dir", opt.output_dir, "Directory for emitted artifacts");
        sub->add_option("--seed", opt.seed, "Override run.seed")->each([&](const std::string &) {
            opt.seed_given = true;
        });
        sub->add_flag("--quiet,-q", opt.quiet, "Print nothing on success");
    };
    auto *run = app.add_subcommand("run", "Run the engines listed in the scenario");
    add_common(run);
    auto *compare = app.add_subcommand("compare", "Run twm, moyal and liouville side by side");
    add_common(compare);
    auto *validate = app.add_subcommand("validate", "Check a scenario and print it with defaults filled");
    add_common(validate);
    std::string dump_path;
    auto *info = app.add_subcommand("info", "Describe an MBGD grid dump");
    info->add_option("dump", dump_path, "Grid dump file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) return do_run(opt, false);
        if (*compare) return do_run(opt, true);
        if (*validate) return do_validate(opt);
        return do_info(dump_path);
    } catch (const qlbeam::ConfigError &e) {
        std::fprintf(stderr, "invalid scenario: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
