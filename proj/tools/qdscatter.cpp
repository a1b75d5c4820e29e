// qdscatter - run a scenario from an INI configuration.
//
//   qdscatter g1-trace --config configs/default.ini --out results/ --set drive.saturation=0.25
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.

#include "qds/config.hpp"
#include "qds/io.hpp"
#include "qds/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// --config as given, else relative to $QDSCATTER_CONFIG_DIR; without --config,
// $QDSCATTER_CONFIG_DIR/<scenario>.ini or default.ini when present.
std::optional<fs::path> locate_config(const std::string& given, const std::string& scenario) {
    const char* env = std::getenv("QDSCATTER_CONFIG_DIR");
    const fs::path dir = env ? fs::path(env) : fs::path();
    if (!given.empty()) {
        const fs::path p(given);
        if (fs::exists(p) || p.is_absolute() || dir.empty()) return p;
        const fs::path alt = dir / p;
        return fs::exists(alt) ? alt : p;
    }
    if (dir.empty()) return std::nullopt;
    for (const fs::path name : {fs::path(scenario + ".ini"), fs::path("default.ini")}) {
        if (fs::exists(dir / name)) return dir / name;
    }
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Light scattering from a phonon-coupled emitter in a low-Q cavity"};
    app.set_version_flag("--version", std::string(qds::version()));

    std::string scenario;
    std::string config;
    std::string out_dir = ".";
    std::vector<std::string> sets;
    std::vector<std::string> data;
    qds::ScenarioOptions opt;

    app.add_option("scenario", scenario, "g1-trace | spectrum | saturation-sweep | detuning-sweep | fit-phonon | fit-spectra")
        ->required()
        ->check(CLI::IsMember(qds::scenario_names()));
    app.add_option("-c,--config", config, "INI configuration file");
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("-s,--set", sets, "override, key=value (repeatable)")->take_all();
    app.add_option("-w,--workers", opt.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "seed for synthesized noise");
    app.add_option("-d,--data", data, "input data file(s) for fits");
    app.add_flag("-v,--verbose", opt.verbose, "progress on stderr and diagnostics.json");
    app.add_flag("--dump-phonon", opt.dump_phonon, "write the phonon table (g1-trace)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        qds::RunConfig cfg;
        if (const auto path = locate_config(config, scenario)) {
            if (!fs::exists(*path)) {
                std::cerr << "error: config file not found: " << path->string() << "\n";
                return 2;
            }
            cfg = qds::load_config(*path);
            if (opt.verbose) std::cerr << "config: " << path->string() << "\n";
        }
        for (const auto& s : sets) qds::apply_override(cfg, s);
        opt.out_dir = out_dir;
        for (const auto& d : data) opt.data.emplace_back(d);
        const auto files = qds::run_scenario(scenario, cfg, opt);
        for (const auto& f : files) std::cout << f.string() << "\n";
        return 0;
    } catch (const qds::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qds::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
