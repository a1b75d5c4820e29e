// lineshapes.hpp - area-normalized peak profiles used by the spectral fits.

#pragma once

#include <complex>

namespace qds {

// Faddeeva function w(z) = exp(-z^2) erfc(-i z) for Im z >= 0
// (Weideman's rational series, 32 terms).
std::complex<double> faddeeva(std::complex<double> z);

double gaussian(double x, double center, double fwhm, double area);
double lorentzian(double x, double center, double fwhm, double area);
double voigt(double x, double center, double gauss_fwhm, double lorentz_fwhm, double area);

// sigma of a Gaussian with the given FWHM.
double fwhm_to_sigma(double fwhm);

} // namespace qds
