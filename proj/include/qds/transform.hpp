// transform.hpp - discrete one-sided Fourier transform of a tau >= 0 trace,
// extended to a two-sided spectrum through g(-tau) = conj(g(tau)).

#pragma once

#include <complex>
#include <vector>

namespace qds {

struct FrequencyGrid {
    double domega{0.0};
    int size{0};
    // Index 0 is the most negative frequency, -size/2 * domega.
    double omega(int i) const { return domega * (i - size / 2); }
};

FrequencyGrid frequency_grid(double dtau, int fft_size);

// S(w_i) = 2 Re[ h ( sum_j f_j exp(-i w_i tau_j) - f_0 / 2 ) ] on the grid of
// frequency_grid(dtau, fft_size). The trace is zero-padded to fft_size.
std::vector<double> two_sided_spectrum(const std::vector<std::complex<double>>& f, double dtau, int fft_size);

} // namespace qds
