// fitting.hpp - parameter extraction from fringe-contrast traces and spectra.

#pragma once

#include "qds/cavity_filter.hpp"
#include "qds/least_squares.hpp"
#include "qds/params.hpp"
#include "qds/spectra.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qds {

struct FitResult {
    std::vector<std::pair<std::string, double>> params;
    double residual_rms{0.0};
    int iterations{0};
    bool converged{false};
    bool at_lower_bound{false};
    std::optional<Eigen::MatrixXd> covariance;  // in the reported parameters
    std::vector<double> history;
    std::string message;

    double get(const std::string& name) const;
};

// Raised when one component of a multi-part fit fails.
class FitError : public NumericalError {
public:
    FitError(std::string component, const std::string& message)
        : NumericalError(component + ": " + message), component_(std::move(component)) {}
    const std::string& component() const noexcept { return component_; }

private:
    std::string component_;
};

// Short-time model: |detected G(tau)| / detected G(0), i.e. the cavity-filtered
// phonon correlation with the zero-phonon part frozen at its tau = 0 value.
std::vector<double> g1_fit_model(const std::vector<double>& taus, double alpha, double nu_c, double temperature,
                                 const FilterSpec& cavity, double dtau = 0.02);
double g1_fit_model(double tau, double alpha, double nu_c, double temperature, const FilterSpec& cavity,
                    double dtau = 0.02);

struct FringePoint {
    double tau{0.0};
    double v{0.0};
    double err{0.0};  // <= 0 means unknown
};

struct PhononFitOptions {
    double temperature{4.2};
    double epsilon{0.0};       // data carry the (1 - epsilon) contrast deficit
    double tau_fit_max{15.0};
    int max_iterations{200};
    double dtau{0.02};
};

// Fits (alpha, nu_c) with alpha = p0^2 and nu_c = p1^2. Residuals are weighted
// by 1/err when every point carries an error, otherwise uniform.
FitResult fit_phonon_params(const std::vector<FringePoint>& data, const FilterSpec& cavity,
                            std::pair<double, double> init, const PhononFitOptions& options = {});

enum class PlateauMode {
    Extrapolated,  // zero-phonon level from the radiative decay carried back to tau = 0
    AtMarker       // zero-phonon level read off at t_phonon
};

struct PlateauMarkers {
    double t_phonon{15.0};
    double t_rad{200.0};
};

EmissionFractions extract_fractions_from_plateaus(const std::vector<double>& taus, const std::vector<double>& v,
                                                  const PlateauMarkers& markers,
                                                  PlateauMode mode = PlateauMode::AtMarker);

struct SpectrumSample {
    double omega{0.0};  // ps^-1
    double counts{0.0};
};

struct AreaFitOptions {
    double low_res_fwhm{0.0};   // spectrometer Gaussian, fixed in the zero-phonon Voigt
    double high_res_fwhm{0.0};  // interferometer response; 0 leaves it free
    double fsr{0.0};            // free spectral range; 0 disables replicas
    int max_iterations{400};
};

struct AreaFitResult {
    EmissionFractions fractions;
    FitResult low_res;   // zpl_center, zpl_lorentz_fwhm, zpl_area, psb_center, psb_fwhm, psb_area
    FitResult high_res;  // inc_center, inc_fwhm, inc_area, cs_center, cs_fwhm, cs_area
};

// Both fits weight residuals by 1/counts (floored at 1e-3 of the peak).
AreaFitResult area_fractions_from_spectra(const std::vector<SpectrumSample>& low_res,
                                          const std::vector<SpectrumSample>& high_res,
                                          const AreaFitOptions& options);

} // namespace qds
