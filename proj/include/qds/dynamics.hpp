// dynamics.hpp - polaron-frame master equation for the driven two-level emitter.
//
// Basis index 0 is the ground state |0>, index 1 the exciton |X>.
// Density matrices are vectorized row-major: vec(rho)[2 i + j] = rho(i, j),
// so vec(A rho B) = kron(A, B^T) vec(rho).

#pragma once

#include "qds/params.hpp"
#include "qds/phonon.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qds {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

namespace ops {
Mat2 sigma();      // |0><X|
Mat2 sigma_dag();  // |X><0|
Mat2 sigma_x();
Mat2 sigma_y();
Mat2 sigma_z();    // |X><X| - |0><0|
Mat2 excited();    // |X><X|
Mat2 identity();

Vec4 vec(const Mat2& m);
Mat2 unvec(const Vec4& v);
// Superoperator of rho -> A rho B.
Mat4 sandwich(const Mat2& a, const Mat2& b);
Mat4 commutator(const Mat2& h);  // rho -> [h, rho]
Mat4 dissipator(const Mat2& c);  // rho -> c rho c^+ - {c^+ c, rho}/2
} // namespace ops

struct DensityMatrix2 {
    Mat2 m{Mat2::Zero()};

    cplx r00() const { return m(0, 0); }
    cplx r0x() const { return m(0, 1); }
    cplx rx0() const { return m(1, 0); }
    cplx rxx() const { return m(1, 1); }
    cplx trace() const { return m.trace(); }
    Vec4 vec() const { return ops::vec(m); }
    static DensityMatrix2 from_vec(const Vec4& v) { return {ops::unvec(v)}; }
    static DensityMatrix2 ground();
};

struct PhononRates {
    cplx gx0, gxc, gxs;
    cplx gy0, gyc, gys;
};

struct EmRates {
    double gamma_p{0.0};
    double lamb_shift{0.0};
    cplx gamma_complex;
};

// Detunings in the frame rotating at the laser, all derived from the
// user-facing delta_lx / delta_xc in one place.
struct FrameDetunings {
    double delta_tilde;     // polaron-shifted exciton minus laser
    double cavity_exciton;  // cavity minus polaron-shifted exciton
    double filter_center;   // filter centre relative to the laser
};

FrameDetunings frame_detunings(const DriveParams& drive, const CavityParams& cavity,
                               double shift, const ModelOptions& options = {});

PhononRates phonon_rates(const PhononTables& tables, double eta);

EmRates em_rates(const PhononTables& tables, const CavityParams& cavity, const DriveParams& drive,
                 const ModelOptions& options = {});

struct LiouvillianInfo {
    double omega{0.0};        // bare Rabi frequency
    double omega_r{0.0};      // renormalized Omega * B
    double delta_tilde{0.0};
    double eta{0.0};          // sqrt(delta_tilde^2 + omega_r^2)
    double pure_dephasing{0.0};
    PhononRates phonon{};
    EmRates em{};
};

class Liouvillian {
public:
    Liouvillian(const Mat4& generator, const LiouvillianInfo& info, double ss_tol = 1e-9);

    const Mat4& matrix() const { return l_; }
    const LiouvillianInfo& info() const { return info_; }
    const Eigen::Vector4cd& eigenvalues() const { return lambda_; }
    bool diagonalizable() const { return diagonalizable_; }
    double ss_tol() const { return ss_tol_; }

    Vec4 apply(const Vec4& x) const { return l_ * x; }
    Vec4 evolve(const Vec4& x, double tau) const;
    // Samples x(k * dtau) for k = 0..count-1.
    std::vector<Vec4> evolve_grid(const Vec4& x, double dtau, std::size_t count) const;

    DensityMatrix2 steady_state() const;

private:
    Mat4 l_;
    LiouvillianInfo info_;
    double ss_tol_;
    Eigen::Vector4cd lambda_;
    Mat4 v_;
    Mat4 v_inv_;
    bool diagonalizable_{true};
};

// Generator for given drive and cavity. The coherent part uses Omega_R or the
// bare Omega per options.coherent_rabi; pure_dephasing is the extra decay rate of
// the coherences, so 1/T2 = Gamma_P/2 + pure_dephasing.
Liouvillian build_liouvillian(const PhononTables& tables, const DriveParams& drive,
                              const CavityParams& cavity, double pure_dephasing,
                              const ModelOptions& options = {}, double ss_tol = 1e-9);

// Same, with the electromagnetic rates supplied directly (atomic configurations).
Liouvillian build_liouvillian(const PhononTables& tables, const DriveParams& drive,
                              const EmRates& em, double pure_dephasing,
                              const ModelOptions& options = {}, double ss_tol = 1e-9,
                              const CavityParams& cavity = {});

DensityMatrix2 steady_state(const Liouvillian& l);

std::vector<DensityMatrix2> propagate(const Liouvillian& l, const DensityMatrix2& rho0,
                                      const std::vector<double>& taus);

// Composite Simpson rule on uniform samples; a trailing odd interval is closed
// with the trapezoid rule.
cplx simpson(const std::vector<cplx>& f, double h);

} // namespace qds
