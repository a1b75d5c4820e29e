#include "qds/phonon.hpp"

#include <algorithm>
#include <cmath>

namespace qds {

namespace {

constexpr double kSmallNu = 1e-6;      // in units of nu_c; below it nu*coth -> 2kT
constexpr double kPhiTolerance = 1e-12;
constexpr double kQuietSpan = 2.0;     // ps of consecutive small |phi| before cutting

int odd_count(int n) { return std::max(3, n | 1); }

double nu_coth(double nu, double kt, double nu_c) {
    if (kt <= 0.0) return nu;
    if (nu < kSmallNu * nu_c) return 2.0 * kt;
    return nu / std::tanh(nu / (2.0 * kt));
}

} // namespace

double spectral_density(double nu, const PhononParams& p) {
    const double x = nu / p.nu_c;
    return p.alpha * nu * nu * nu * std::exp(-x * x);
}

PropagatorQuadrature::PropagatorQuadrature(const PhononParams& p, const NumericsParams& n) {
    const int count = odd_count(n.quad_points);
    const double nu_max = n.nu_max_factor * p.nu_c;
    dnu_ = nu_max / (count - 1);
    const double kt = thermal_freq(p.temperature);
    nu_.resize(count);
    w_re_.resize(count);
    w_im_.resize(count);
    for (int k = 0; k < count; ++k) {
        const double nu = dnu_ * k;
        double w = (k == 0 || k == count - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        w *= p.alpha * dnu_ / 3.0;
        const double gauss = std::exp(-(nu / p.nu_c) * (nu / p.nu_c));
        nu_[k] = nu;
        w_re_[k] = w * gauss * nu_coth(nu, kt, p.nu_c);
        w_im_[k] = w * gauss * nu;
    }
    double sum = 0.0;
    for (double w : w_re_) sum += w;
    phi0_ = sum;
}

double PropagatorQuadrature::alias_limit() const {
    // Simpson weights alternate, so images sit every pi/dnu; stay half-way.
    return 0.5 * constants::pi / dnu_;
}

cplx PropagatorQuadrature::operator()(double tau) const {
    if (tau == 0.0) return {phi0_, 0.0};
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < nu_.size(); ++k) {
        const double x = nu_[k] * tau;
        re += w_re_[k] * std::cos(x);
        im -= w_im_[k] * std::sin(x);
    }
    return {re, im};
}

cplx phonon_propagator(double tau, const PhononParams& p, const NumericsParams& n) {
    if (p.alpha == 0.0) return {};
    NumericsParams grid = n;
    const double needed = 4.0 * std::abs(tau) * n.nu_max_factor * p.nu_c / constants::pi + 1.0;
    if (needed > grid.quad_points) grid.quad_points = static_cast<int>(std::ceil(needed));
    const PropagatorQuadrature quad(p, grid);
    const cplx value = quad(std::abs(tau));
    return tau < 0.0 ? std::conj(value) : value;
}

double franck_condon(const PhononParams& p, const NumericsParams& n) {
    if (p.alpha == 0.0) return 1.0;
    return std::exp(-0.5 * PropagatorQuadrature(p, n).phi0());
}

double polaron_shift(const PhononParams& p) {
    return p.alpha * std::sqrt(constants::pi) * p.nu_c * p.nu_c * p.nu_c / 4.0;
}

BathCorrelations bath_correlations(cplx phi, double b_factor) {
    const double b2 = b_factor * b_factor;
    const cplx ep = std::exp(phi);
    const cplx em = std::exp(-phi);
    return {b2 * ep, b2 * (ep + em - 2.0), b2 * (ep - em)};
}

BathCorrelations bath_correlations(double tau, const PhononParams& p, const NumericsParams& n) {
    return bath_correlations(phonon_propagator(tau, p, n), franck_condon(p, n));
}

PhononTables::PhononTables(const PhononParams& p, const NumericsParams& n)
    : params_(p), dtau_(n.dtau), b_(1.0), shift_(qds::polaron_shift(p)) {
    if (p.alpha == 0.0) {
        phi_.assign(1, cplx{});
        return;
    }
    const PropagatorQuadrature quad(p, n);
    b_ = std::exp(-0.5 * quad.phi0());

    const double limit = std::min(n.tau_max, quad.alias_limit());
    const auto last = static_cast<std::size_t>(std::floor(limit / dtau_));
    const auto quiet_needed = static_cast<std::size_t>(std::ceil(kQuietSpan / dtau_));
    const double settle = 3.0 / p.nu_c;

    phi_.reserve(last + 1);
    std::size_t quiet = 0;
    for (std::size_t k = 0; k <= last; ++k) {
        const cplx value = quad(dtau_ * static_cast<double>(k));
        phi_.push_back(value);
        const double tau = dtau_ * static_cast<double>(k);
        if (tau > settle && std::abs(value) < kPhiTolerance * quad.phi0()) {
            if (++quiet >= quiet_needed) break;
        } else {
            quiet = 0;
        }
    }
    phi_[0] = {quad.phi0(), 0.0};
}

cplx PhononTables::phi(double tau) const {
    const double t = std::abs(tau);
    const double pos = t / dtau_;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    cplx value;
    if (k + 1 >= phi_.size()) {
        value = (k + 1 == phi_.size() && pos == static_cast<double>(k)) ? phi_.back() : cplx{};
    } else {
        const double f = pos - static_cast<double>(k);
        value = (1.0 - f) * phi_[k] + f * phi_[k + 1];
    }
    return tau < 0.0 ? std::conj(value) : value;
}

cplx PhononTables::G(double tau) const { return b_ * b_ * std::exp(phi(tau)); }

} // namespace qds
