// scenarios.hpp - the command-line scenarios as library calls, plus the sweep
// data they are built from.

#pragma once

#include "qds/config.hpp"
#include "qds/fitting.hpp"
#include "qds/phonon.hpp"
#include "qds/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace qds {

struct ScenarioOptions {
    std::filesystem::path out_dir{"."};
    int workers{1};
    std::uint64_t seed{12345};
    bool verbose{false};
    bool dump_phonon{false};
    std::vector<std::filesystem::path> data;
};

const std::vector<std::string>& scenario_names();

// Runs a scenario and writes its files into opt.out_dir. Returns the written
// paths in sorted order. Throws ValidationError for bad input and
// NumericalError when a stage fails.
std::vector<std::filesystem::path> run_scenario(const std::string& name, const RunConfig& cfg,
                                                const ScenarioOptions& opt);

// Calls fn(0..n-1) on up to `workers` threads. The first failing index (in
// index order) is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Validated parameters with the drive resolved from [drive] saturation, if set.
ValidatedParams resolve_drive(const RunConfig& cfg, const PhononTables& tables);

// gamma(delta_lx) for the bundle, with xi defaulting to the Purcell rate.
double point_dephasing(const ValidatedParams& p, const PhononTables& tables);

struct SaturationRow {
    double s{0.0};
    double omega{0.0};
    double f_cs{0.0};
    double f_inc{0.0};
    double f_psb{0.0};
    double f_cs_atomic{0.0};
};

std::vector<SaturationRow> saturation_sweep(const RunConfig& cfg, int workers = 1);

struct DetuningRow {
    double delta{0.0};  // delta_lx, ps^-1
    double p_tot{0.0};  // with dephasing when enabled
    double p_coh{0.0};
    double f_cs_raw{0.0};
    double f_cs_dephased{0.0};
    double f_cs_wandered{0.0};
};

struct DetuningSweep {
    std::vector<DetuningRow> rows;
    double xi{0.0};
    double gamma_p{0.0};
};

std::vector<double> detuning_grid(const SweepSpec& sweep);
DetuningSweep detuning_sweep(const RunConfig& cfg, int workers = 1);

struct SyntheticFringe {
    std::vector<FringePoint> data;
    std::vector<double> clean;  // noiseless v at the same taus
    FilterSpec filter;
};

// Forward-model fringe contrast sampled every fit.sample_dtau up to
// fit.tau_fit_max, with Gaussian noise of relative size fit.synth_noise.
SyntheticFringe synthesize_fringe_data(const RunConfig& cfg, std::uint64_t seed);

struct SyntheticSpectra {
    std::vector<SpectrumSample> low_res;
    std::vector<SpectrumSample> high_res;
    EmissionFractions truth;
    double low_res_fwhm{0.0};
    double high_res_fwhm{0.0};
};

// Filtered model spectrum seen through a Gaussian spectrometer response
// (whole band) and through a narrow interferometer response (zero-phonon
// window only). Noise is counting-like: fit.synth_noise * sqrt(counts * peak).
SyntheticSpectra synthesize_spectra(const RunConfig& cfg, std::uint64_t seed);

} // namespace qds
