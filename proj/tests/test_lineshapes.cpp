#include "oracles.hpp"

#include "qds/lineshapes.hpp"

#include "approx.hpp"

#include <doctest.h>

#include <cmath>

using namespace qds;

namespace {

// w(x + iy) for y > 0 as the Lorentz-weighted average of exp(-t^2).
std::complex<double> faddeeva_integral(double x, double y) {
    const double h = 1e-3;
    std::vector<double> re, im;
    for (double t = -9.0; t <= 9.0 + 1e-12; t += h) {
        const double d = (x - t) * (x - t) + y * y;
        re.push_back(std::exp(-t * t) * y / d);
        im.push_back(std::exp(-t * t) * (x - t) / d);
    }
    return {oracle::trapezoid(re, h) / oracle::pi, oracle::trapezoid(im, h) / oracle::pi};
}

double integrate(const std::function<double(double)>& f, double a, double b, double h) {
    std::vector<double> y;
    for (double x = a; x <= b + 1e-12; x += h) y.push_back(f(x));
    return oracle::trapezoid(y, h);
}

} // namespace

TEST_CASE("Faddeeva function") {
    CHECK(std::abs(faddeeva({0.0, 0.0}) - 1.0) < 1e-9);
    CHECK(faddeeva({0.0, 1.0}).real() == approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-9));
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.0, 6.0}) {
        for (double y : {0.05, 0.3, 1.0, 4.0}) {
            const auto ref = faddeeva_integral(x, y);
            CAPTURE(x);
            CAPTURE(y);
            CHECK(std::abs(faddeeva({x, y}) - ref) < 1e-6);
        }
    }
    // real axis: Re w(x) = exp(-x^2)
    for (double x : {0.3, 1.5, 3.0}) CHECK(faddeeva({x, 0.0}).real() == approx(std::exp(-x * x)).epsilon(1e-8));
}

TEST_CASE("profiles are area-normalized with the stated widths") {
    CHECK(integrate([](double x) { return gaussian(x, 0.3, 0.2, 2.0); }, -3.0, 3.0, 1e-4) ==
          approx(2.0).epsilon(1e-10));
    CHECK(gaussian(0.4, 0.3, 0.2, 1.0) == approx(0.5 * gaussian(0.3, 0.3, 0.2, 1.0)).epsilon(1e-12));
    CHECK(lorentzian(0.4, 0.3, 0.2, 1.0) == approx(0.5 * lorentzian(0.3, 0.3, 0.2, 1.0)).epsilon(1e-12));
    CHECK(lorentzian(0.3, 0.3, 0.2, 1.0) == approx(1.0 / (oracle::pi * 0.1)));
    CHECK(fwhm_to_sigma(2.0 * std::sqrt(2.0 * std::log(2.0))) == approx(1.0));
    CHECK(integrate([](double x) { return voigt(x, 0.0, 0.3, 0.1, 1.5); }, -400.0, 400.0, 1e-3) ==
          approx(1.5).epsilon(1e-3));
}

TEST_CASE("Voigt equals the numerical convolution") {
    const double gw = 0.3, lw = 0.12;
    for (double x : {0.0, 0.1, 0.25, 0.6, 1.5}) {
        const double conv = integrate([&](double t) { return gaussian(t, 0.0, gw, 1.0) * lorentzian(x - t, 0.0, lw, 1.0); },
                                      -3.0, 3.0, 1e-4);
        CAPTURE(x);
        CHECK(voigt(x, 0.0, gw, lw, 1.0) == approx(conv).epsilon(1e-6));
    }
    CHECK(voigt(0.2, 0.0, 0.0, lw, 1.0) == lorentzian(0.2, 0.0, lw, 1.0));
    CHECK(voigt(0.2, 0.0, gw, 0.0, 1.0) == gaussian(0.2, 0.0, gw, 1.0));
}
