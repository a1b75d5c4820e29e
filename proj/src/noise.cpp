#include "qds/noise.hpp"

#include <cmath>

namespace qds {

double gamma_of_detuning(double delta_lx, const NoiseParams& n, double xi_default) {
    const double xi = n.xi.value_or(xi_default);
    const double d2 = delta_lx * delta_lx;
    if (d2 + xi * xi == 0.0) return 0.0;
    return n.gamma_max * (1.0 - xi * xi / (d2 + xi * xi));
}

namespace {

void check_curves(const PowerCurves& c) {
    const std::size_t n = c.deltas.size();
    if (c.p_tot.size() != n || c.p_coh.size() != n) {
        throw ValidationError("curves", "p_tot, p_coh and deltas must have the same length");
    }
    for (std::size_t k = 2; k < n; ++k) {
        const double h0 = c.deltas[1] - c.deltas[0];
        const double hk = c.deltas[k] - c.deltas[k - 1];
        if (std::abs(hk - h0) > 1e-9 * std::abs(h0)) throw ValidationError("deltas", "detuning grid must be uniform");
    }
}

std::vector<double> smear(const std::vector<double>& y, const std::vector<double>& w, int half) {
    const int n = static_cast<int>(y.size());
    std::vector<double> out(y.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0, norm = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int k = i + j;
            if (k < 0 || k >= n) continue;
            acc += w[static_cast<std::size_t>(j + half)] * y[static_cast<std::size_t>(k)];
            norm += w[static_cast<std::size_t>(j + half)];
        }
        out[static_cast<std::size_t>(i)] = acc / norm;
    }
    return out;
}

} // namespace

PowerCurves convolve_wandering(const PowerCurves& curves, double fwhm) {
    check_curves(curves);
    if (fwhm < 0.0) throw ValidationError("wandering_fwhm", "wandering_fwhm must be non-negative");
    if (fwhm == 0.0 || curves.deltas.size() < 2) return curves;
    const double h = curves.deltas[1] - curves.deltas[0];
    const double span = curves.deltas.back() - curves.deltas.front();
    if (fwhm > span / 4.0) throw ValidationError("wandering_fwhm", "wandering FWHM exceeds a quarter of the detuning span");

    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const int half = static_cast<int>(std::floor(5.0 * sigma / std::abs(h)));
    std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
    for (int j = -half; j <= half; ++j) {
        const double x = j * h / sigma;
        w[static_cast<std::size_t>(j + half)] = std::exp(-0.5 * x * x);
    }
    PowerCurves out = curves;
    out.p_tot = smear(curves.p_tot, w, half);
    out.p_coh = smear(curves.p_coh, w, half);
    return out;
}

std::vector<double> wandering_fraction(const PowerCurves& curves, double fwhm) {
    const PowerCurves c = convolve_wandering(curves, fwhm);
    std::vector<double> f(c.deltas.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = c.p_tot[k] > 0.0 ? c.p_coh[k] / c.p_tot[k] : 0.0;
    return f;
}

} // namespace qds
