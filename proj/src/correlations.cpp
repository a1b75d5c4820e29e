#include "qds/correlations.hpp"

#include <cmath>
#include <sstream>

namespace qds {

CorrelationTrace g1_opt(const Liouvillian& l, const DensityMatrix2& rho_ss, double dtau, std::size_t count) {
    const Mat2 start = ops::sigma() * rho_ss.m;
    const auto samples = l.evolve_grid(ops::vec(start), dtau, count);
    CorrelationTrace out;
    out.dtau = dtau;
    out.values.reserve(count);
    // Tr(sigma^+ X) = X(0, 1), which is vec index 1.
    for (const auto& x : samples) out.values.push_back(x(1));
    if (!out.values.empty()) out.values.front() = rho_ss.rxx();
    out.coherent_weight = std::norm(rho_ss.rx0());
    out.normalization = rho_ss.rxx().real();
    return out;
}

CorrelationTrace polaron_g1(const CorrelationTrace& trace, const PhononTables& tables) {
    if (std::abs(trace.dtau - tables.dtau()) > 1e-12 * trace.dtau) {
        throw ValidationError("dtau", "correlation trace and phonon table use different tau grids");
    }
    CorrelationTrace out = trace;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] *= tables.G_at(k);
    out.coherent_weight *= tables.b_squared();
    return out;
}

SplitTrace split_coherent(const CorrelationTrace& trace) {
    SplitTrace out{trace, trace.coherent_weight};
    for (auto& v : out.incoherent.values) v -= trace.coherent_weight;
    out.incoherent.coherent_weight = 0.0;
    if (!trace.values.empty()) {
        const double tail = std::abs(out.incoherent.values.back());
        if (tail > 1e-4 * std::abs(trace.normalization)) {
            std::ostringstream msg;
            msg << "incoherent correlation has not decayed by tau_max = " << trace.tau_max()
                << " ps (|g_inc| = " << tail << ")";
            throw NumericalError(msg.str());
        }
    }
    return out;
}

std::vector<double> fringe_contrast(const CorrelationTrace& trace, double epsilon) {
    if (!(trace.normalization > 0.0)) throw NumericalError("no emission: g(0) = 0");
    std::vector<double> v;
    v.reserve(trace.values.size());
    for (const auto& g : trace.values) v.push_back((1.0 - epsilon) * std::abs(g) / trace.normalization);
    return v;
}

CorrelationTrace apply_instrument_response(const CorrelationTrace& trace, const NoiseParams& noise) {
    const double di = noise.instrument_dtau;
    const double mu = noise.laser_mu;
    if (!(di > 0.0 && std::isfinite(di)) && mu == 0.0) return trace;
    CorrelationTrace out = trace;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double t = out.tau(k);
        double env = std::exp(-mu * t);
        if (di > 0.0 && std::isfinite(di)) env *= std::exp(-(t / di) * (t / di));
        out.values[k] *= env;
    }
    out.coherent_weight = 0.0;
    return out;
}

} // namespace qds
