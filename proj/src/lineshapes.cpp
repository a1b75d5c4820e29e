#include "qds/lineshapes.hpp"

#include <array>
#include <cmath>

namespace qds {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kTerms = 32;

struct WeidemanCoefficients {
    double l;
    std::array<double, kTerms> a;  // highest power first

    WeidemanCoefficients() : l(std::sqrt(kTerms / std::sqrt(2.0))), a{} {
        const int m = 2 * kTerms;
        const int m2 = 2 * m;
        // f on theta_k = k pi / M, k = -M+1..M-1, with f(-M) = 0, laid out for
        // an inverse-shift before the transform.
        std::array<double, 4 * kTerms> f{};
        for (int k = -m + 1; k <= m - 1; ++k) {
            const double t = l * std::tan(0.5 * k * kPi / m);
            f[static_cast<std::size_t>(k + m)] = std::exp(-t * t) * (l * l + t * t);
        }
        // ifftshift then DFT; only the real part of coefficients 1..N is needed.
        std::array<double, 4 * kTerms> shifted{};
        for (int i = 0; i < m2; ++i) shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + m) % m2)];
        for (int n = 1; n <= kTerms; ++n) {
            double re = 0.0;
            for (int i = 0; i < m2; ++i) re += shifted[static_cast<std::size_t>(i)] * std::cos(2.0 * kPi * n * i / m2);
            a[static_cast<std::size_t>(kTerms - n)] = re / m2;
        }
    }
};

const WeidemanCoefficients& coefficients() {
    static const WeidemanCoefficients c;
    return c;
}

} // namespace

std::complex<double> faddeeva(std::complex<double> z) {
    const auto& c = coefficients();
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> denom = c.l - i * z;
    const std::complex<double> zz = (c.l + i * z) / denom;
    std::complex<double> p = 0.0;
    for (double coef : c.a) p = p * zz + coef;
    return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

double fwhm_to_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))); }

double gaussian(double x, double center, double fwhm, double area) {
    const double s = fwhm_to_sigma(fwhm);
    const double u = (x - center) / s;
    return area * std::exp(-0.5 * u * u) / (s * std::sqrt(2.0 * kPi));
}

double lorentzian(double x, double center, double fwhm, double area) {
    const double hw = 0.5 * fwhm;
    const double u = x - center;
    return area * hw / (kPi * (u * u + hw * hw));
}

double voigt(double x, double center, double gauss_fwhm, double lorentz_fwhm, double area) {
    if (gauss_fwhm <= 0.0) return lorentzian(x, center, lorentz_fwhm, area);
    if (lorentz_fwhm <= 0.0) return gaussian(x, center, gauss_fwhm, area);
    const double s = fwhm_to_sigma(gauss_fwhm);
    const std::complex<double> z((x - center) / (s * std::sqrt(2.0)), 0.5 * lorentz_fwhm / (s * std::sqrt(2.0)));
    return area * faddeeva(z).real() / (s * std::sqrt(2.0 * kPi));
}

} // namespace qds
