#include "qds/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qds {

namespace {

void check_edges(const std::vector<double>& s, const char* name, std::vector<Diagnostic>& warnings) {
    if (s.empty()) return;
    double peak = 0.0;
    for (double v : s) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(s.front()), std::abs(s.back()));
    if (peak > 0.0 && edge > 0.01 * peak) {
        std::ostringstream msg;
        msg << name << " spectrum leaks to the grid edge (" << edge / peak << " of peak)";
        warnings.push_back({name, msg.str()});
    }
}

} // namespace

double SpectrumResult::filtered_total(std::size_t i) const {
    return filter_response(omegas[i], filter) * (s_opt[i] + s_sb[i]);
}

std::vector<double> spectrum_opt(const CorrelationTrace& incoherent, const PhononTables& tables, int fft_size) {
    auto s = two_sided_spectrum(incoherent.values, incoherent.dtau, fft_size);
    const double b2 = tables.b_squared();
    for (auto& v : s) v *= b2;
    return s;
}

std::vector<double> spectrum_sb(const CorrelationTrace& full, const PhononTables& tables, int fft_size) {
    if (std::abs(full.dtau - tables.dtau()) > 1e-12 * full.dtau) {
        throw ValidationError("dtau", "correlation trace and phonon table use different tau grids");
    }
    const double b2 = tables.b_squared();
    const std::size_t n = std::min(full.values.size(), tables.phi_samples().size());
    std::vector<cplx> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = (tables.G_at(k) - b2) * full.values[k];
    return two_sided_spectrum(f, full.dtau, fft_size);
}

SpectrumResult compute_spectrum(const CorrelationTrace& g_opt, const PhononTables& tables, int fft_size,
                                const std::optional<FilterSpec>& filter) {
    const SplitTrace parts = split_coherent(g_opt);
    SpectrumResult out;
    out.grid = frequency_grid(g_opt.dtau, fft_size);
    out.omegas.resize(static_cast<std::size_t>(fft_size));
    for (int i = 0; i < fft_size; ++i) out.omegas[static_cast<std::size_t>(i)] = out.grid.omega(i);
    out.s_opt = spectrum_opt(parts.incoherent, tables, fft_size);
    out.s_sb = spectrum_sb(g_opt, tables, fft_size);
    out.coherent_weight = tables.b_squared() * parts.coherent_weight.real();
    out.filter_applied = filter.has_value();
    out.filter = filter;
    check_edges(out.s_opt, "s_opt", out.warnings);
    check_edges(out.s_sb, "s_sb", out.warnings);
    return out;
}

EmissionFractions fractions_from_powers(double p_coh, double p_inc, double p_psb) {
    EmissionFractions f;
    f.p_coh = p_coh;
    f.p_inc = p_inc;
    f.p_psb = p_psb;
    f.p_tot = p_coh + p_inc + p_psb;
    if (!(f.p_tot > 0.0)) throw NumericalError("total emitted power is zero");
    f.f_cs = p_coh / f.p_tot;
    f.f_inc = p_inc / f.p_tot;
    f.f_psb = p_psb / f.p_tot;
    return f;
}

EmissionFractions fractions(const SpectrumResult& s) {
    double inc = 0.0, psb = 0.0;
    for (std::size_t i = 0; i < s.omegas.size(); ++i) {
        const double h = filter_response(s.omegas[i], s.filter);
        inc += h * s.s_opt[i];
        psb += h * s.s_sb[i];
    }
    const double scale = s.grid.domega / (2.0 * constants::pi);
    const double coh = filter_response(0.0, s.filter) * s.coherent_weight;
    return fractions_from_powers(coh, inc * scale, psb * scale);
}

} // namespace qds
