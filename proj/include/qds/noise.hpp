// noise.hpp - detuning-dependent pure dephasing and Gaussian spectral wandering.

#pragma once

#include "qds/params.hpp"

#include <vector>

namespace qds {

// gamma(delta) = gamma_max (1 - xi^2 / (delta^2 + xi^2)); xi falls back to
// xi_default when NoiseParams::xi is unset.
double gamma_of_detuning(double delta_lx, const NoiseParams& n, double xi_default);

struct PowerCurves {
    std::vector<double> deltas;  // uniform grid of delta_lx, ps^-1
    std::vector<double> p_tot;
    std::vector<double> p_coh;
};

// Both curves convolved with a unit-area Gaussian of the given FWHM (direct
// sum, kernel cut at 5 sigma and renormalized over the points that exist).
// Throws ValidationError when fwhm exceeds a quarter of the grid span.
PowerCurves convolve_wandering(const PowerCurves& curves, double fwhm);

// p_coh / p_tot after convolution.
std::vector<double> wandering_fraction(const PowerCurves& curves, double fwhm);

} // namespace qds
