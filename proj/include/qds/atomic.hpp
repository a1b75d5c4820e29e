// atomic.hpp - phonon-free two-level reference: closed-form coherent fraction
// and the same quantities from the master-equation machinery with alpha = 0.

#pragma once

#include "qds/correlations.hpp"
#include "qds/params.hpp"
#include "qds/spectra.hpp"

namespace qds {

struct AtomicParams {
    double t1{1.0};        // lifetime, ps
    double t2{2.0};        // coherence time, ps
    double omega{0.0};     // Rabi frequency, ps^-1
    double delta_lx{0.0};  // laser minus emitter, ps^-1
};

void validate_atomic(const AtomicParams& p);

double saturation(const AtomicParams& p);

// (T2 / 2 T1) / (1 + S)
double coherent_fraction_atomic(const AtomicParams& p);

// Pure-dephasing rate giving T2 for lifetime T1: 1/T2 - 1/(2 T1).
double atomic_pure_dephasing(const AtomicParams& p);

struct AtomicResult {
    CorrelationTrace trace;
    SpectrumResult spectrum;
    EmissionFractions fractions;
};

// Runs the generator with alpha = 0, Gamma_P = 1/T1, no Lamb shift and
// pure dephasing 1/T2 - 1/(2 T1); spectra are unfiltered.
AtomicResult atomic_g1_and_spectrum(const AtomicParams& p, const NumericsParams& numerics = {});

} // namespace qds
