#include "qds/atomic.hpp"

#include "qds/pipeline.hpp"

#include <cmath>

namespace qds {

void validate_atomic(const AtomicParams& p) {
    if (!(p.t1 > 0.0)) throw ValidationError("t1", "t1 must be positive");
    if (!(p.t2 > 0.0)) throw ValidationError("t2", "t2 must be positive");
    if (p.t2 > 2.0 * p.t1 * (1.0 + 1e-12)) throw ValidationError("t2", "t2 must not exceed 2 t1");
    if (!(p.omega >= 0.0)) throw ValidationError("omega", "omega must be non-negative");
}

double saturation(const AtomicParams& p) {
    return p.omega * p.omega * p.t1 * p.t2 / (1.0 + p.delta_lx * p.delta_lx * p.t2 * p.t2);
}

double coherent_fraction_atomic(const AtomicParams& p) {
    return p.t2 / (2.0 * p.t1) / (1.0 + saturation(p));
}

double atomic_pure_dephasing(const AtomicParams& p) { return 1.0 / p.t2 - 0.5 / p.t1; }

AtomicResult atomic_g1_and_spectrum(const AtomicParams& p, const NumericsParams& numerics) {
    validate_atomic(p);
    PhononParams phonon;
    phonon.alpha = 0.0;
    ModelOptions options;
    options.filter_enabled = false;
    DriveParams drive{p.omega, p.delta_lx};
    const ValidatedParams params = validate_params(phonon, drive, CavityParams{}, NoiseParams{}, numerics, options);
    const PhononTables tables(phonon, numerics);

    PointRequest request;
    request.pure_dephasing = std::max(0.0, atomic_pure_dephasing(p));
    EmRates em;
    em.gamma_p = 1.0 / p.t1;
    em.gamma_complex = em.gamma_p;
    request.em_override = em;
    request.keep_spectrum = true;
    PointResult r = evaluate_point(params, tables, request);

    AtomicResult out;
    out.trace = r.g_opt;
    if (r.spectrum) out.spectrum = std::move(*r.spectrum);
    out.fractions = r.fractions;
    return out;
}

} // namespace qds
