// pipeline.hpp - evaluates one parameter point end to end:
// Liouvillian -> steady state -> g_opt -> polaron dressing -> spectra -> fractions.

#pragma once

#include "qds/cavity_filter.hpp"
#include "qds/correlations.hpp"
#include "qds/dynamics.hpp"
#include "qds/params.hpp"
#include "qds/phonon.hpp"
#include "qds/spectra.hpp"

#include <optional>

namespace qds {

// Saturation label S = Omega_R^2 T1 T2 / (1 + delta^2 T2^2) with T1 = 1/Gamma_P
// and T2 = 2 T1.
double saturation_label(double omega_r, double delta, double gamma_p);
double omega_r_for_saturation(double saturation, double delta, double gamma_p);

struct PointRequest {
    double pure_dephasing{0.0};
    std::optional<EmRates> em_override;  // skip the cavity integral (atomic configurations)
    bool keep_spectrum{false};
    bool keep_detected{false};
};

struct PointResult {
    LiouvillianInfo info;
    bool diagonalizable{true};
    DensityMatrix2 rho;
    CorrelationTrace g_opt;
    CorrelationTrace g_pol;
    std::optional<CorrelationTrace> g_detected;
    std::optional<SpectrumResult> spectrum;
    EmissionFractions fractions;
    std::optional<FilterSpec> filter;
    std::vector<Diagnostic> warnings;
};

std::size_t trace_length(const NumericsParams& n);

PointResult evaluate_point(const ValidatedParams& params, const PhononTables& tables,
                           const PointRequest& request = {});

// Drive amplitude that realizes a saturation label for the given bundle.
double omega_for_saturation(double saturation, const ValidatedParams& params, const PhononTables& tables);

} // namespace qds
