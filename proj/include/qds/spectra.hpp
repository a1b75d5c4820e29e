// spectra.hpp - emission spectra and the coherent / incoherent / sideband split.
//
// Spectra are per unit angular frequency in the frame rotating with the laser,
// w = w_emitted - w_laser, normalized so that (1/2pi) int S dw equals the
// weight of the corresponding part of g(0). The coherent line is a delta at
// w = 0 carried only through its weight.

#pragma once

#include "qds/cavity_filter.hpp"
#include "qds/correlations.hpp"
#include "qds/phonon.hpp"
#include "qds/transform.hpp"

#include <optional>
#include <vector>

namespace qds {

struct SpectrumResult {
    FrequencyGrid grid;
    std::vector<double> omegas;
    std::vector<double> s_opt;     // B^2 * incoherent zero-phonon spectrum
    std::vector<double> s_sb;      // phonon sideband
    double coherent_weight{0.0};   // B^2 g_coh, before filtering
    bool filter_applied{false};
    std::optional<FilterSpec> filter;
    std::vector<Diagnostic> warnings;

    double filtered_total(std::size_t i) const;
};

// B^2 * transform of the incoherent optical correlation.
std::vector<double> spectrum_opt(const CorrelationTrace& incoherent, const PhononTables& tables, int fft_size);

// Transform of (G(tau) - B^2) g_opt(tau), including the plateau term.
std::vector<double> spectrum_sb(const CorrelationTrace& full, const PhononTables& tables, int fft_size);

SpectrumResult compute_spectrum(const CorrelationTrace& g_opt, const PhononTables& tables, int fft_size,
                                const std::optional<FilterSpec>& filter);

struct EmissionFractions {
    double f_cs{0.0};
    double f_inc{0.0};
    double f_psb{0.0};
    double p_coh{0.0};
    double p_inc{0.0};
    double p_psb{0.0};
    double p_tot{0.0};
};

// Filtered powers (1/2pi) int H S dw and P_coh = H(0) B^2 g_coh, and their ratios.
EmissionFractions fractions(const SpectrumResult& spectrum);

EmissionFractions fractions_from_powers(double p_coh, double p_inc, double p_psb);

} // namespace qds
