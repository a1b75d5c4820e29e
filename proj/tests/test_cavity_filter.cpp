#include "oracles.hpp"

#include "qds/cavity_filter.hpp"
#include "qds/pipeline.hpp"
#include "qds/transform.hpp"

#include "approx.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace qds;

namespace {

// exp(-gamma tau) (a cos(w1 tau) + b exp(i w2 tau)) + plateau
CorrelationTrace damped(double dtau, std::size_t n, double gamma, double w1, double w2, double plateau = 0.0) {
    CorrelationTrace t;
    t.dtau = dtau;
    for (std::size_t k = 0; k < n; ++k) {
        const double tau = dtau * k;
        t.values.push_back(std::exp(-gamma * tau) * (0.7 * std::cos(w1 * tau) + 0.3 * std::exp(cplx(0, w2 * tau))) +
                           plateau);
    }
    t.coherent_weight = plateau;
    t.normalization = t.values[0].real();
    return t;
}

// Direct two-sided convolution with k(u) = (kappa/4) exp(i c u - kappa |u| / 2).
cplx brute_filter(const CorrelationTrace& g, const FilterSpec& f, double tau, int refine = 8) {
    const double h = g.dtau / refine;
    const double span = g.tau_max();
    const double reach = span + 60.0 / f.kappa;
    auto sample = [&](double s) -> cplx {
        const double a = std::abs(s);
        if (a >= span) return g.coherent_weight;
        const double pos = a / g.dtau;
        const auto k = static_cast<std::size_t>(pos);
        const double fr = pos - k;
        const cplx v = (1.0 - fr) * g.values[k] + fr * g.values[k + 1];
        return s < 0.0 ? std::conj(v) : v;
    };
    std::vector<cplx> y;
    const int n = static_cast<int>(std::lround(reach / h));
    for (int i = -n; i <= n; ++i) {
        const double s = h * i;
        const double u = tau - s;
        y.push_back(0.25 * f.kappa * std::exp(cplx(-0.5 * f.kappa * std::abs(u), f.center_offset * u)) * sample(s));
    }
    return oracle::trapezoid(y, h);
}

} // namespace

TEST_CASE("unit-peak Lorentzian") {
    const FilterSpec f{0.7, 3.8, true};
    CHECK(filter_lorentzian(0.7, f) == 1.0);
    CHECK(filter_lorentzian(0.7 + 1.9, f) == approx(0.5).epsilon(1e-15));
    CHECK(filter_lorentzian(0.7 - 1.9, f) == approx(0.5).epsilon(1e-15));
    CHECK(filter_lorentzian(0.7 + 5 * 3.8, f) == approx(1.0 / 101.0).epsilon(1e-14));
    CHECK(filter_response(100.0, std::nullopt) == 1.0);
    CHECK(filter_response(0.7, f) == 1.0);
}

TEST_CASE("filter centre follows the frame bookkeeping") {
    const DriveParams d{0.1, 0.4};
    const CavityParams c{0.2, 3.8, 0.1};
    const FilterSpec f = make_filter(d, c, 0.04);
    CHECK(f.center_offset == approx(0.1 - 0.4));
    CHECK(f.kappa == 3.8);
    ModelOptions o;
    o.filter_center = FilterCenter::ExcitonRelative;
    CHECK(make_filter(d, c, 0.04, o).center_offset == 0.1);
}

TEST_CASE("a pure laser line is scaled by the response at the laser") {
    CorrelationTrace laser;
    laser.dtau = 0.02;
    laser.values.assign(2000, 0.4);
    laser.coherent_weight = 0.4;
    laser.normalization = 0.4;
    const FilterSpec f{1.3, 3.8, true};
    const CorrelationTrace out = detect_g1(laser, f);
    const double h0 = filter_lorentzian(0.0, f);
    CHECK(out.coherent_weight.real() == approx(0.4 * h0).epsilon(1e-14));
    for (const auto& v : out.values) CHECK(std::abs(v - 0.4 * h0) < 1e-14);
}

TEST_CASE("matches a direct convolution") {
    const CorrelationTrace g = damped(0.02, 3001, 0.3, 1.1, -0.6, 0.2);
    const FilterSpec f{0.8, 3.8, true};
    const CorrelationTrace out = detect_g1(g, f);
    for (double tau : {0.0, 0.5, 3.0, 17.0, 59.0}) {
        const cplx ref = brute_filter(g, f, tau);
        CAPTURE(tau);
        CHECK(std::abs(out.values[static_cast<std::size_t>(std::lround(tau / 0.02))] - ref) < 1e-5);
    }
    // the direct convolution of a Hermitian trace is real at zero delay
    CHECK(std::abs(brute_filter(g, f, 0.0).imag()) < 1e-10);
    CHECK(out.values[0].imag() == 0.0);
    CHECK(out.normalization == out.values[0].real());
}

TEST_CASE("convolution theorem") {
    const CorrelationTrace g = damped(0.02, 50001, 0.5, 1.0, 2.5);
    const FilterSpec f{0.7, mev_to_angfreq(2.51), true};
    const CorrelationTrace out = detect_g1(g, f);
    const int m = 1 << 17;
    const auto s_in = two_sided_spectrum(g.values, g.dtau, m);
    const auto s_out = two_sided_spectrum(out.values, g.dtau, m);
    const FrequencyGrid fg = frequency_grid(g.dtau, m);
    const double top = *std::max_element(s_in.begin(), s_in.end());
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(s_out[i] - filter_lorentzian(fg.omega(i), f) * s_in[i]));
    }
    CHECK(worst < 0.01 * top);
}

TEST_CASE("linearity") {
    const CorrelationTrace a = damped(0.02, 4001, 0.2, 0.9, 0.4);
    const CorrelationTrace b = damped(0.02, 4001, 0.6, -0.3, 1.7);
    const FilterSpec f{-0.4, 3.8, true};
    CorrelationTrace mix = a;
    for (std::size_t k = 0; k < mix.size(); ++k) mix.values[k] = 2.5 * a.values[k] - 0.75 * b.values[k];
    const CorrelationTrace fa = detect_g1(a, f), fb = detect_g1(b, f), fm = detect_g1(mix, f);
    for (std::size_t k = 1; k < mix.size(); ++k) {
        CHECK(std::abs(fm.values[k] - (2.5 * fa.values[k] - 0.75 * fb.values[k])) < 1e-13);
    }
}

TEST_CASE("an infinitely broad filter is transparent") {
    // kappa = 1e6 needs dtau * kappa <= 0.5, so the trace lives on a 1e-7 ps grid
    const FilterSpec wide{0.0, 1e6, true};
    const CorrelationTrace in = damped(1e-7, 200001, 5e2, 1e3, 2e3);
    const CorrelationTrace out = detect_g1(in, wide);
    const double norm = out.values[0].real() / in.values[0].real();
    double worst = 0.0;
    for (std::size_t k = 0; k < in.size(); k += 7) {
        worst = std::max(worst, std::abs(out.values[k] / norm - in.values[k]));
    }
    CHECK(worst < 1e-3 * in.values[0].real());
}

TEST_CASE("grid too coarse for the filter") {
    const CorrelationTrace g = damped(0.2, 100, 0.3, 1.0, 0.0);
    CHECK_THROWS_AS(detect_g1(g, {0.0, 3.8, true}), ValidationError);
    CorrelationTrace complex_plateau = damped(0.02, 100, 0.3, 1.0, 0.0, 0.1);
    complex_plateau.coherent_weight = cplx(0.1, 0.1);
    CHECK_THROWS_AS(detect_g1(complex_plateau, {0.0, 3.8, true}), ValidationError);
}

TEST_CASE("the cavity suppresses the phonon sideband") {
    const PhononTables t(PhononParams{});
    ValidatedParams p = validate_params({}, {}, {}, {}, {});
    p.drive.omega = omega_for_saturation(0.25, p, t);
    const EmissionFractions filtered = evaluate_point(p, t).fractions;
    p.options.filter_enabled = false;
    const EmissionFractions open = evaluate_point(p, t).fractions;
    CHECK(filtered.f_psb < open.f_psb);
    CHECK(open.f_psb == approx(1.0 - t.b_squared()).epsilon(0.02));
    CHECK(filtered.f_cs + filtered.f_inc + filtered.f_psb == approx(1.0).epsilon(1e-12));
}
