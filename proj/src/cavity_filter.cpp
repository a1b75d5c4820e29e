#include "qds/cavity_filter.hpp"

#include "qds/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace qds {

namespace {

// Integrals over one step of length h of exp(beta u) against the two linear
// hat functions: (1 - u/h) -> first, u/h -> second.
struct StepWeights {
    cplx decay;   // exp(beta h)
    cplx first;
    cplx second;
};

StepWeights step_weights(cplx beta, double h) {
    const cplx x = beta * h;
    StepWeights w;
    w.decay = std::exp(x);
    cplx full, ramp;  // int_0^h e^{beta u} du,  int_0^h e^{beta u} (u/h) du
    if (std::abs(x) < 0.1) {
        cplx term = 1.0;
        double fact = 1.0;
        full = 0.0;
        ramp = 0.0;
        for (int n = 0; n < 14; ++n) {
            if (n > 0) {
                term *= x;
                fact *= n;
            }
            full += term / (fact * (n + 1));
            ramp += term / (fact * (n + 2));
        }
        full *= h;
        ramp *= h;
    } else {
        full = (w.decay - 1.0) / beta;
        ramp = (w.decay * (x - 1.0) + 1.0) / (beta * x);
    }
    w.first = full - ramp;
    w.second = ramp;
    return w;
}

// B_j = int_{tau_j}^inf exp(beta (s - tau_j)) f(s) ds with f = 0 past the end.
std::vector<cplx> backward_sweep(const std::vector<cplx>& f, cplx beta, double h) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n, cplx{});
    if (n < 2) return out;
    const StepWeights w = step_weights(beta, h);
    for (std::size_t j = n - 1; j-- > 0;) {
        out[j] = w.decay * out[j + 1] + w.first * f[j] + w.second * f[j + 1];
    }
    return out;
}

} // namespace

FilterSpec make_filter(const DriveParams& drive, const CavityParams& cavity, double shift,
                       const ModelOptions& options) {
    const FrameDetunings d = frame_detunings(drive, cavity, shift, options);
    return FilterSpec{d.filter_center, cavity.kappa, true};
}

double filter_lorentzian(double omega, const FilterSpec& f) {
    const double hw = 0.5 * f.kappa;
    const double x = omega - f.center_offset;
    return hw * hw / (x * x + hw * hw);
}

double filter_response(double omega, const std::optional<FilterSpec>& f) {
    return f ? filter_lorentzian(omega, *f) : 1.0;
}

CorrelationTrace detect_g1(const CorrelationTrace& trace, const FilterSpec& f) {
    if (!(f.kappa > 0.0)) throw ValidationError("kappa", "kappa must be positive");
    if (trace.dtau * f.kappa > 0.5) {
        std::ostringstream msg;
        msg << "grid too coarse for the cavity filter: dtau * kappa = " << trace.dtau * f.kappa << " > 0.5";
        throw ValidationError("dtau", msg.str());
    }
    const cplx c = trace.coherent_weight;
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c))) {
        throw ValidationError("coherent_weight", "coherent plateau must be real");
    }
    const std::size_t n = trace.values.size();
    const double h = trace.dtau;
    const double hk = 0.5 * f.kappa;
    const double wc = f.center_offset;

    std::vector<cplx> d(n), dc(n);
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = trace.values[k] - c;
        dc[k] = std::conj(d[k]);
    }

    // Backward part R(tau) = int_tau^inf exp((-i wc - kappa/2)(s - tau)) d(s) ds.
    const auto back = backward_sweep(d, cplx(-hk, -wc), h);
    // Forward part F(tau) = int_-inf^tau exp((i wc - kappa/2)(tau - s)) d(s) ds,
    // seeded with the negative-time half, where d(-s) = conj(d(s)).
    const cplx a(-hk, wc);
    const auto seed = backward_sweep(dc, a, h);
    std::vector<cplx> fwd(n);
    if (n > 0) fwd[0] = seed[0];
    if (n > 1) {
        // Forward step integrates exp(a (h - u)) against the hats, i.e. the
        // backward weights with the roles of the two nodes swapped.
        const StepWeights w = step_weights(a, h);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            fwd[j + 1] = w.decay * fwd[j] + w.second * d[j] + w.first * d[j + 1];
        }
    }

    CorrelationTrace out;
    out.dtau = h;
    out.values.resize(n);
    const double pref = 0.25 * f.kappa;
    const double h0 = filter_lorentzian(0.0, f);
    out.coherent_weight = c.real() * h0;
    for (std::size_t k = 0; k < n; ++k) out.values[k] = pref * (fwd[k] + back[k]) + out.coherent_weight;
    if (n > 0) {
        out.values[0] = out.values[0].real();
        out.normalization = out.values[0].real();
    }
    return out;
}

} // namespace qds
