#include "qds/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qds {

namespace {

void require(bool ok, const char* field, const char* message) {
    if (!ok) throw ValidationError(field, message);
}

bool finite(double x) { return std::isfinite(x); }

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

ValidatedParams validate_params(const PhononParams& phonon, const DriveParams& drive,
                                const CavityParams& cavity, const NoiseParams& noise,
                                const NumericsParams& numerics, const ModelOptions& options) {
    require(finite(phonon.alpha) && phonon.alpha >= 0.0, "alpha", "alpha must be non-negative");
    require(finite(phonon.nu_c) && phonon.nu_c > 0.0, "nu_c", "nu_c must be positive");
    require(finite(phonon.temperature) && phonon.temperature >= 0.0, "temperature",
            "temperature must be non-negative");

    require(finite(drive.omega) && drive.omega >= 0.0, "omega", "omega must be non-negative");
    require(finite(drive.delta_lx), "delta_lx", "delta_lx must be finite");

    require(finite(cavity.g) && cavity.g > 0.0, "g", "g must be positive");
    require(finite(cavity.kappa) && cavity.kappa > 0.0, "kappa", "kappa must be positive");
    require(finite(cavity.delta_xc), "delta_xc", "delta_xc must be finite");

    require(finite(noise.gamma_max) && noise.gamma_max >= 0.0, "gamma_max",
            "gamma_max must be non-negative");
    require(!noise.xi || (finite(*noise.xi) && *noise.xi >= 0.0), "xi", "xi must be non-negative");
    require(finite(noise.wandering_fwhm) && noise.wandering_fwhm >= 0.0, "wandering_fwhm",
            "wandering_fwhm must be non-negative");
    require(finite(noise.epsilon) && noise.epsilon >= 0.0 && noise.epsilon < 1.0, "epsilon",
            "epsilon must lie in [0, 1)");
    require(finite(noise.laser_mu) && noise.laser_mu >= 0.0, "laser_mu",
            "laser_mu must be non-negative");
    require(!std::isnan(noise.instrument_dtau) && noise.instrument_dtau >= 0.0, "instrument_dtau",
            "instrument_dtau must be non-negative");

    require(finite(numerics.nu_max_factor) && numerics.nu_max_factor > 0.0, "nu_max_factor",
            "nu_max_factor must be positive");
    require(numerics.quad_points >= 3, "quad_points", "quad_points must be at least 3");
    require(finite(numerics.dtau) && numerics.dtau > 0.0, "dtau", "dtau must be positive");
    require(finite(numerics.tau_max) && numerics.tau_max > numerics.dtau, "tau_max",
            "tau_max must exceed dtau");
    require(is_power_of_two(numerics.fft_size), "fft_size", "fft_size must be a power of two");
    require(finite(numerics.ss_tol) && numerics.ss_tol > 0.0, "ss_tol", "ss_tol must be positive");

    const double samples = std::floor(numerics.tau_max / numerics.dtau + 0.5) + 1.0;
    require(static_cast<double>(numerics.fft_size) >= samples, "fft_size",
            "fft_size must hold every tau sample (tau_max/dtau + 1)");

    // The generalized Rabi frequency is bounded by sqrt(omega^2 + delta^2).
    const double eta_bound = std::hypot(drive.omega, drive.delta_lx);
    const double fastest = std::max({phonon.nu_c, cavity.kappa, eta_bound});
    if (numerics.dtau > 0.1 / fastest * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "dtau must resolve the fastest scale: dtau <= " << 0.1 / fastest << " ps";
        throw ValidationError("dtau", msg.str());
    }

    ValidatedParams out{phonon, drive, cavity, noise, numerics, options, {}};
    if (cavity.kappa < 4.0 * cavity.g) {
        out.warnings.push_back({"kappa", "kappa < 4 g: outside the low-Q (bad-cavity) regime"});
    }
    return out;
}

ValidatedParams validate_params(const ValidatedParams& bundle) {
    ValidatedParams out = validate_params(bundle.phonon, bundle.drive, bundle.cavity, bundle.noise,
                                          bundle.numerics, bundle.options);
    // Keep diagnostics attached earlier (e.g. by check_window) without duplicating.
    for (const auto& w : bundle.warnings) {
        const bool seen = std::any_of(out.warnings.begin(), out.warnings.end(), [&](const auto& o) {
            return o.field == w.field && o.message == w.message;
        });
        if (!seen) out.warnings.push_back(w);
    }
    return out;
}

void check_window(ValidatedParams& bundle, double gamma_p) {
    if (gamma_p <= 0.0) return;
    if (bundle.numerics.tau_max < 10.0 / gamma_p) {
        std::ostringstream msg;
        msg << "tau_max shorter than 10/Gamma_P = " << 10.0 / gamma_p << " ps";
        const std::string text = msg.str();
        const bool seen = std::any_of(bundle.warnings.begin(), bundle.warnings.end(),
                                      [&](const auto& o) { return o.message == text; });
        if (!seen) bundle.warnings.push_back({"tau_max", text});
    }
}

} // namespace qds
