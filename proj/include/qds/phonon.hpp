// phonon.hpp - super-Ohmic phonon bath: spectral density, propagator phi(tau),
// Franck-Condon factor and the derived bath correlation functions.

#pragma once

#include "qds/params.hpp"

#include <complex>
#include <vector>

namespace qds {

using cplx = std::complex<double>;

double spectral_density(double nu, const PhononParams& p);

// Composite Simpson rule over nu in [0, nu_max_factor * nu_c]. The node count
// is fixed by NumericsParams (forced odd), so results are reproducible.
class PropagatorQuadrature {
public:
    PropagatorQuadrature(const PhononParams& p, const NumericsParams& n = {});

    cplx operator()(double tau) const;
    double phi0() const { return phi0_; }
    double node_spacing() const { return dnu_; }

    // Largest |tau| for which the fixed nu grid is free of aliasing images.
    double alias_limit() const;

private:
    std::vector<double> nu_;
    std::vector<double> w_re_;  // weight * nu * exp(-nu^2/nu_c^2) * coth(nu / 2kT)
    std::vector<double> w_im_;  // weight * nu * exp(-nu^2/nu_c^2)
    double dnu_{0.0};
    double phi0_{0.0};
};

// Direct evaluation; tau may be negative (phi(-tau) = conj(phi(tau))). The node
// count grows with |tau| so the grid never aliases at the requested time.
cplx phonon_propagator(double tau, const PhononParams& p, const NumericsParams& n = {});

double franck_condon(const PhononParams& p, const NumericsParams& n = {});

// Continuum value of sum_k g_k^2 / nu_k.
double polaron_shift(const PhononParams& p);

struct BathCorrelations {
    cplx G;    // B^2 exp(phi)
    cplx Lxx;  // B^2 (exp(phi) + exp(-phi) - 2)
    cplx Lyy;  // B^2 (exp(phi) - exp(-phi))
};

BathCorrelations bath_correlations(cplx phi, double b_factor);
BathCorrelations bath_correlations(double tau, const PhononParams& p, const NumericsParams& n = {});

// phi(tau) tabulated on the uniform simulation grid tau_k = k * dtau. Past the
// cutoff (where phi has decayed below tolerance, or the quadrature would start
// to alias) phi is taken as zero.
class PhononTables {
public:
    PhononTables(const PhononParams& p, const NumericsParams& n = {});

    const PhononParams& params() const { return params_; }
    double b_factor() const { return b_; }
    double b_squared() const { return b_ * b_; }
    double polaron_shift() const { return shift_; }
    double dtau() const { return dtau_; }
    double cutoff() const { return dtau_ * static_cast<double>(phi_.size() - 1); }

    // Tabulated samples; index k covers tau = k * dtau up to the cutoff.
    const std::vector<cplx>& phi_samples() const { return phi_; }

    cplx phi(double tau) const;
    cplx phi_at(std::size_t k) const { return k < phi_.size() ? phi_[k] : cplx{}; }
    cplx G(double tau) const;
    cplx G_at(std::size_t k) const { return b_ * b_ * std::exp(phi_at(k)); }
    BathCorrelations bath(double tau) const { return bath_correlations(phi(tau), b_); }
    BathCorrelations bath_at(std::size_t k) const { return bath_correlations(phi_at(k), b_); }

private:
    PhononParams params_;
    double dtau_;
    double b_;
    double shift_;
    std::vector<cplx> phi_;
};

} // namespace qds
