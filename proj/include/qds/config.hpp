// config.hpp - INI-style run configuration.
//
// Sections: [phonon] [drive] [cavity] [noise] [numerics] [model] [sweep] [fit] [output].
// Energies and rates take an explicit unit suffix ("meV", "ueV", "ps^-1");
// a bare number is read in internal units (ps^-1, ps, K, ps^2).

#pragma once

#include "qds/params.hpp"
#include "qds/units.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qds {

struct SweepSpec {
    std::vector<double> saturations{0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0};
    double detuning_min{mev_to_angfreq(-0.8)};
    double detuning_max{mev_to_angfreq(0.8)};
    double detuning_step{mev_to_angfreq(0.01)};
    std::vector<double> spectrum_detunings;  // ps^-1, spectra written at these points
    bool dephasing{true};
    bool wandering{true};
};

struct FitSpec {
    double t_phonon{15.0};
    double t_rad{200.0};
    double tau_fit_max{15.0};
    double synth_noise{0.01};            // relative noise for self-generated data
    double sample_dtau{0.005};           // sampling step of self-generated fringe data, ps
    std::optional<double> alpha0;        // initial guesses; default to [phonon]
    std::optional<double> nu_c0;
    int max_iterations{200};
    double low_res_fwhm{0.0};            // instrument Gaussian FWHM for low-res spectra, ps^-1
    double high_res_fwhm{0.0};           // high-res IRF FWHM, ps^-1 (0 = free)
    double fsr{0.0};                     // Fabry-Perot free spectral range, ps^-1 (0 = none)
};

struct OutputSpec {
    int stride{5};                  // write every n-th tau sample
    double spectrum_window{6.0};    // |omega| range written to spectrum CSVs, ps^-1
    bool center_on_exciton{false};  // report spectra relative to the exciton line
};

struct RunConfig {
    PhononParams phonon;
    DriveParams drive;
    std::optional<double> saturation;   // when set, resolves drive.omega once Gamma_P is known
    CavityParams cavity;
    NoiseParams noise;
    NumericsParams numerics;
    ModelOptions options;
    SweepSpec sweep;
    FitSpec fit;
    OutputSpec output;
};

// Parses configuration text. Unknown sections/keys and malformed values throw
// ValidationError naming the offending key (and line, when known).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Applies "section.key=value" (or "key=value" when the key is unique).
void apply_override(RunConfig& cfg, const std::string& assignment);

// Canonical (key, value) listing in internal units, used for output headers.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg);

ValidatedParams validate(const RunConfig& cfg);

// Parses a single quantity like "2.51 meV" or "135 ueV" into ps^-1.
double parse_frequency(const std::string& text);

} // namespace qds
