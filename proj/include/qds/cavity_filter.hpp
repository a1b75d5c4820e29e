// cavity_filter.hpp - the low-Q cavity as a Lorentzian filter, in time and frequency.
//
// Frequencies are measured from the laser (coherent line at 0). The filter has
// unit peak: H(w) = (kappa/2)^2 / ((w - centre)^2 + (kappa/2)^2), whose time
// kernel is k(u) = (kappa/4) exp(i centre u - kappa |u| / 2).

#pragma once

#include "qds/correlations.hpp"
#include "qds/params.hpp"

#include <optional>

namespace qds {

struct FilterSpec {
    double center_offset{0.0};  // filter centre minus laser frequency
    double kappa{1.0};
    bool unit_peak{true};
};

FilterSpec make_filter(const DriveParams& drive, const CavityParams& cavity, double shift,
                       const ModelOptions& options = {});

double filter_lorentzian(double omega, const FilterSpec& f);

// Response of an optional filter; an absent filter passes everything.
double filter_response(double omega, const std::optional<FilterSpec>& f);

// Two-sided convolution of the trace with k. The decaying part is integrated
// exactly for piecewise-linear samples by forward/backward recursion; the
// plateau (which must be real) goes through analytically as coherent_weight * H(0).
// Throws ValidationError when dtau * kappa > 0.5.
CorrelationTrace detect_g1(const CorrelationTrace& trace, const FilterSpec& f);

} // namespace qds
