// params.hpp - parameter records shared by every stage of the pipeline.
//
// All rates and detunings are angular frequencies in ps^-1, times are in ps.

#pragma once

#include "qds/units.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qds {

struct PhononParams {
    double alpha{0.0447};      // deformation-potential coupling, ps^2
    double nu_c{1.28};         // cutoff frequency, ps^-1
    double temperature{4.2};   // bath temperature, K
};

// delta_lx = omega_laser - omega_exciton.
struct DriveParams {
    double omega{0.0};
    double delta_lx{0.0};
};

// delta_xc = omega_cavity - omega_exciton.
struct CavityParams {
    double g{mev_to_angfreq(0.135)};
    double kappa{mev_to_angfreq(2.51)};
    double delta_xc{0.0};
};

struct NoiseParams {
    double gamma_max{0.0};           // asymptotic detuning-induced dephasing
    std::optional<double> xi;        // width of gamma(delta); unset -> emitter natural linewidth
    double wandering_fwhm{0.0};      // Gaussian spectral wandering, ps^-1
    double epsilon{0.0};             // interferometer contrast deficit
    double laser_mu{0.0};            // laser linewidth 1/tau_L
    double instrument_dtau{0.0};     // spectrometer temporal response; 0 disables it
};

struct NumericsParams {
    double nu_max_factor{8.0};
    int quad_points{2001};
    double tau_max{1000.0};
    double dtau{0.02};
    int fft_size{262144};
    double ss_tol{1e-9};
};

// Which Rabi frequency drives the coherent part of the polaron generator.
enum class CoherentRabi { Renormalized, Bare };

// Reference line for user-facing detunings (delta_lx, delta_xc).
//   PolaronShifted: measured from the observed zero-phonon line.
//   Bare: measured from the unshifted exciton energy.
enum class DetuningReference { PolaronShifted, Bare };

// Where the cavity filter sits relative to the laser.
//   CavityAbsolute: omega_c - omega_L (filter fixed to the cavity mode).
//   ExcitonRelative: delta_xc alone (filter follows the laser).
enum class FilterCenter { CavityAbsolute, ExcitonRelative };

struct ModelOptions {
    CoherentRabi coherent_rabi{CoherentRabi::Renormalized};
    DetuningReference detuning_reference{DetuningReference::PolaronShifted};
    FilterCenter filter_center{FilterCenter::CavityAbsolute};
    bool filter_enabled{true};
};

struct Diagnostic {
    std::string field;
    std::string message;
};

struct ValidatedParams {
    PhononParams phonon;
    DriveParams drive;
    CavityParams cavity;
    NoiseParams noise;
    NumericsParams numerics;
    ModelOptions options;
    std::vector<Diagnostic> warnings;
};

class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Raised when a numerical stage cannot produce a trustworthy result
// (non-converged integrals, degenerate steady states, leaking windows).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ValidatedParams validate_params(const PhononParams& phonon, const DriveParams& drive,
                                const CavityParams& cavity, const NoiseParams& noise,
                                const NumericsParams& numerics,
                                const ModelOptions& options = {});

ValidatedParams validate_params(const ValidatedParams& bundle);

// Post-hoc grid check once the Purcell rate is known; appends a warning when
// tau_max does not cover the slowest radiative decay.
void check_window(ValidatedParams& bundle, double gamma_p);

} // namespace qds
