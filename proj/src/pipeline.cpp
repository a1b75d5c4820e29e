#include "qds/pipeline.hpp"

#include <cmath>

namespace qds {

double saturation_label(double omega_r, double delta, double gamma_p) {
    const double t1 = 1.0 / gamma_p;
    const double t2 = 2.0 * t1;
    return omega_r * omega_r * t1 * t2 / (1.0 + delta * delta * t2 * t2);
}

double omega_r_for_saturation(double saturation, double delta, double gamma_p) {
    const double t1 = 1.0 / gamma_p;
    const double t2 = 2.0 * t1;
    return std::sqrt(saturation * (1.0 + delta * delta * t2 * t2) / (t1 * t2));
}

std::size_t trace_length(const NumericsParams& n) {
    return static_cast<std::size_t>(std::floor(n.tau_max / n.dtau + 0.5)) + 1;
}

double omega_for_saturation(double saturation, const ValidatedParams& params, const PhononTables& tables) {
    const EmRates em = em_rates(tables, params.cavity, params.drive, params.options);
    const FrameDetunings d = frame_detunings(params.drive, params.cavity, tables.polaron_shift(), params.options);
    return omega_r_for_saturation(saturation, d.delta_tilde, em.gamma_p) / tables.b_factor();
}

PointResult evaluate_point(const ValidatedParams& params, const PhononTables& tables, const PointRequest& request) {
    PointResult out;
    out.warnings = params.warnings;
    const Liouvillian l =
        request.em_override
            ? build_liouvillian(tables, params.drive, *request.em_override, request.pure_dephasing, params.options,
                                params.numerics.ss_tol, params.cavity)
            : build_liouvillian(tables, params.drive, params.cavity, request.pure_dephasing, params.options,
                                params.numerics.ss_tol);
    out.info = l.info();
    out.diagonalizable = l.diagonalizable();
    if (!out.diagonalizable) {
        out.warnings.push_back({"liouvillian", "generator is not diagonalizable; used matrix exponential"});
    }
    ValidatedParams checked = params;
    check_window(checked, out.info.em.gamma_p);
    if (checked.warnings.size() > params.warnings.size()) out.warnings.push_back(checked.warnings.back());

    out.rho = l.steady_state();
    const std::size_t count = trace_length(params.numerics);
    out.g_opt = g1_opt(l, out.rho, params.numerics.dtau, count);
    out.g_pol = polaron_g1(out.g_opt, tables);

    if (params.options.filter_enabled) {
        out.filter = make_filter(params.drive, params.cavity, tables.polaron_shift(), params.options);
    }
    if (out.rho.rxx().real() <= 0.0) {
        // Undriven emitter: nothing is emitted, fractions are undefined.
        return out;
    }
    SpectrumResult spectrum = compute_spectrum(out.g_opt, tables, params.numerics.fft_size, out.filter);
    out.fractions = fractions(spectrum);
    for (const auto& w : spectrum.warnings) out.warnings.push_back(w);
    if (request.keep_spectrum) out.spectrum = std::move(spectrum);
    if (request.keep_detected) {
        out.g_detected = out.filter ? detect_g1(out.g_pol, *out.filter) : out.g_pol;
    }
    return out;
}

} // namespace qds
