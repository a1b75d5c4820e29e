// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerics.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using M2 = Eigen::Matrix2cd;

constexpr double pi = 3.14159265358979323846;
constexpr double hbar = 0.6582119569;    // meV ps
constexpr double kb = 0.0861733;         // meV / K

inline double kt(double kelvin) { return kb * kelvin / hbar; }

// phi(tau) = int J(nu)/nu^2 [coth(nu/2kT) cos(nu tau) - i sin(nu tau)] dnu by
// plain trapezoid on [0, nu_factor * nu_c].
inline cplx phi(double tau, double alpha, double nu_c, double kelvin, int n = 200001, double nu_factor = 10.0) {
    const double t = kt(kelvin);
    const double h = nu_factor * nu_c / (n - 1);
    double re = 0.0, im = 0.0;
    for (int k = 0; k < n; ++k) {
        const double nu = h * k;
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        const double g = alpha * std::exp(-(nu / nu_c) * (nu / nu_c));
        double c;
        if (t == 0.0) c = nu;
        else if (nu == 0.0) c = 2.0 * t;
        else c = nu / std::tanh(nu / (2.0 * t));
        re += w * g * c * std::cos(nu * tau);
        im -= w * g * nu * std::sin(nu * tau);
    }
    return {re * h, im * h};
}

// Optical-Bloch right-hand side for |0>, |X>: H = d |X><X| + (w/2) sigma_x,
// Lamb shift s, decay gamma_p, extra coherence decay gamma.
inline M2 bloch_rhs(const M2& rho, double d, double w, double gamma_p, double s, double gamma) {
    M2 h;
    h << 0.0, 0.5 * w, 0.5 * w, d + 0.5 * s;
    M2 out = cplx(0, -1) * (h * rho - rho * h);
    const cplx r00 = rho(0, 0), rxx = rho(1, 1), r0x = rho(0, 1), rx0 = rho(1, 0);
    out(0, 0) += gamma_p * rxx;
    out(1, 1) -= gamma_p * rxx;
    out(0, 1) -= (0.5 * gamma_p + gamma) * r0x;
    out(1, 0) -= (0.5 * gamma_p + gamma) * rx0;
    (void)r00;
    return out;
}

// Steady-state excited population S / (2 (1 + S)).
inline double bloch_population(double w, double d, double gamma_p, double gamma) {
    const double t1 = 1.0 / gamma_p;
    const double t2 = 1.0 / (0.5 * gamma_p + gamma);
    const double s = w * w * t1 * t2 / (1.0 + d * d * t2 * t2);
    return s / (2.0 * (1.0 + s));
}

// Classic fixed-step RK4 for dX/dt = f(X) on 2x2 matrices.
inline std::vector<M2> rk4(const std::function<M2(const M2&)>& f, M2 x, double h, std::size_t steps,
                           std::size_t every) {
    std::vector<M2> out;
    out.push_back(x);
    for (std::size_t n = 1; n <= steps; ++n) {
        const M2 k1 = f(x);
        const M2 k2 = f(x + 0.5 * h * k1);
        const M2 k3 = f(x + 0.5 * h * k2);
        const M2 k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (n % every == 0) out.push_back(x);
    }
    return out;
}

inline double trapezoid(const std::vector<double>& y, double h) {
    double s = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) s += (k == 0 || k + 1 == y.size() ? 0.5 : 1.0) * y[k];
    return s * h;
}

inline cplx trapezoid(const std::vector<cplx>& y, double h) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) s += (k == 0 || k + 1 == y.size() ? 0.5 : 1.0) * y[k];
    return s * h;
}

} // namespace oracle
