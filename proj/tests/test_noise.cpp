#include "qds/noise.hpp"
#include "qds/units.hpp"

#include "approx.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace qds;

namespace {

PowerCurves grid_curves(int n, double h, const std::function<double(double)>& tot,
                        const std::function<double(double)>& coh) {
    PowerCurves c;
    for (int i = -n; i <= n; ++i) {
        const double d = h * i;
        c.deltas.push_back(d);
        c.p_tot.push_back(tot(d));
        c.p_coh.push_back(coh(d));
    }
    return c;
}

} // namespace

TEST_CASE("detuning-dependent dephasing") {
    NoiseParams n;
    n.gamma_max = uev_to_angfreq(21.0);
    n.xi = 0.05;
    CHECK(gamma_of_detuning(0.0, n, 1.0) == 0.0);
    CHECK(gamma_of_detuning(0.05, n, 1.0) == approx(0.5 * n.gamma_max).epsilon(1e-14));
    CHECK(gamma_of_detuning(-0.05, n, 1.0) == approx(0.5 * n.gamma_max).epsilon(1e-14));
    CHECK(gamma_of_detuning(0.5, n, 1.0) / n.gamma_max == approx(100.0 / 101.0).epsilon(1e-14));
    CHECK(gamma_of_detuning(1e6, n, 1.0) == approx(n.gamma_max));
    double last = 0.0;
    for (double d = 0.0; d < 1.0; d += 0.01) {
        const double g = gamma_of_detuning(d, n, 1.0);
        CHECK(g >= last);
        last = g;
    }
    // unset xi falls back to the supplied natural linewidth
    NoiseParams a;
    a.gamma_max = 1.0;
    CHECK(gamma_of_detuning(0.044, a, 0.044) == approx(0.5));
    CHECK(gamma_of_detuning(0.0, a, 0.0) == 0.0);
}

TEST_CASE("wandering kernel") {
    const PowerCurves flat = grid_curves(80, 0.01, [](double) { return 2.0; }, [](double) { return 1.5; });
    const PowerCurves c = convolve_wandering(flat, 0.1);
    for (std::size_t k = 0; k < c.deltas.size(); ++k) {
        CHECK(std::abs(c.p_tot[k] - 2.0) < 1e-8);
        CHECK(std::abs(c.p_coh[k] - 1.5) < 1e-8);
    }
    const PowerCurves bump = grid_curves(80, 0.01, [](double d) { return 1.0 + std::exp(-d * d / 0.01); },
                                         [](double d) { return 0.5 * std::exp(-d * d / 0.02); });
    const PowerCurves same = convolve_wandering(bump, 0.0);
    CHECK(same.p_tot == bump.p_tot);
    CHECK(same.p_coh == bump.p_coh);
    const PowerCurves tiny = convolve_wandering(bump, 1e-4);
    for (std::size_t k = 0; k < tiny.deltas.size(); ++k) CHECK(tiny.p_tot[k] == approx(bump.p_tot[k]));

    const auto f = wandering_fraction(bump, 0.15);
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(f[k] == approx(f[n - 1 - k]).epsilon(1e-12));
        CHECK(f[k] >= 0.0);
        CHECK(f[k] <= 1.0);
    }
    // the Gaussian smooths: the peak of a narrow bump goes down
    const PowerCurves wide = convolve_wandering(bump, 0.15);
    CHECK(wide.p_tot[80] < bump.p_tot[80]);
    // exact Gaussian convolution of a Gaussian bump in the interior
    const double s0 = std::sqrt(0.005);  // bump sigma
    const double sk = 0.15 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double st = std::hypot(s0, sk);
    CHECK(wide.p_tot[80] == approx(1.0 + s0 / st).epsilon(1e-3));
}

TEST_CASE("random non-negative curves give fractions in [0, 1]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PowerCurves c;
    for (int i = 0; i < 121; ++i) {
        c.deltas.push_back(-0.6 + 0.01 * i);
        const double tot = u(rng);
        c.p_tot.push_back(tot);
        c.p_coh.push_back(tot * u(rng));
    }
    for (double f : wandering_fraction(c, 0.1)) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("invalid wandering input") {
    const PowerCurves c = grid_curves(10, 0.01, [](double) { return 1.0; }, [](double) { return 0.5; });
    CHECK_THROWS_AS(convolve_wandering(c, 0.06), ValidationError);
    CHECK_THROWS_AS(convolve_wandering(c, -0.01), ValidationError);
    PowerCurves bad = c;
    bad.deltas[3] += 0.004;
    CHECK_THROWS_AS(convolve_wandering(bad, 0.01), ValidationError);
    PowerCurves short_coh = c;
    short_coh.p_coh.pop_back();
    CHECK_THROWS_AS(convolve_wandering(short_coh, 0.01), ValidationError);
}
