// correlations.hpp - first-order field correlations from the quantum
// regression theorem, polaron dressing and the detected-signal models.

#pragma once

#include "qds/dynamics.hpp"
#include "qds/params.hpp"
#include "qds/phonon.hpp"

#include <vector>

namespace qds {

// Samples g(tau_k), tau_k = k * dtau, k >= 0. `values` always hold the full
// correlation; `coherent_weight` is its tau -> infinity plateau, so
// values - coherent_weight decays to zero. Negative tau follows from
// g(-tau) = conj(g(tau)).
struct CorrelationTrace {
    double dtau{0.0};
    std::vector<cplx> values;
    cplx coherent_weight;
    double normalization{0.0};  // g(0)

    std::size_t size() const { return values.size(); }
    double tau(std::size_t k) const { return dtau * static_cast<double>(k); }
    double tau_max() const { return values.empty() ? 0.0 : tau(values.size() - 1); }
};

// g(tau) = Tr(sigma^+ exp(L tau)[sigma rho_ss]) on count samples.
CorrelationTrace g1_opt(const Liouvillian& l, const DensityMatrix2& rho_ss, double dtau, std::size_t count);

// Multiplies by G(tau) = B^2 exp(phi(tau)); the plateau picks up B^2.
CorrelationTrace polaron_g1(const CorrelationTrace& trace, const PhononTables& tables);

struct SplitTrace {
    CorrelationTrace incoherent;  // plateau removed, coherent_weight = 0
    cplx coherent_weight;
};

// Throws NumericalError when the incoherent part has not decayed to
// 1e-4 g(0) at the end of the window.
SplitTrace split_coherent(const CorrelationTrace& trace);

// v(tau) = (1 - epsilon) |g(tau)| / g(0).
std::vector<double> fringe_contrast(const CorrelationTrace& trace, double epsilon);

// Multiplies by exp(-tau^2 / dtau_i^2) exp(-mu tau). The plateau no longer
// survives, so it is folded into the samples (coherent_weight becomes 0).
CorrelationTrace apply_instrument_response(const CorrelationTrace& trace, const NoiseParams& noise);

} // namespace qds
