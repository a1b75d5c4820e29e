#include "qds/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qds {

namespace ops {

Mat2 sigma() {
    Mat2 m = Mat2::Zero();
    m(0, 1) = 1.0;
    return m;
}
Mat2 sigma_dag() { return sigma().adjoint(); }
Mat2 sigma_x() { return sigma() + sigma_dag(); }
Mat2 sigma_y() { return cplx(0.0, 1.0) * (sigma() - sigma_dag()); }
Mat2 sigma_z() {
    Mat2 m = Mat2::Zero();
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}
Mat2 excited() {
    Mat2 m = Mat2::Zero();
    m(1, 1) = 1.0;
    return m;
}
Mat2 identity() { return Mat2::Identity(); }

Vec4 vec(const Mat2& m) { return Vec4(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }

Mat2 unvec(const Vec4& v) {
    Mat2 m;
    m << v(0), v(1), v(2), v(3);
    return m;
}

Mat4 sandwich(const Mat2& a, const Mat2& b) {
    const Mat2 bt = b.transpose();
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * bt;
    return out;
}

Mat4 commutator(const Mat2& h) { return sandwich(h, identity()) - sandwich(identity(), h); }

Mat4 dissipator(const Mat2& c) {
    const Mat2 cdc = c.adjoint() * c;
    return sandwich(c, c.adjoint()) - 0.5 * (sandwich(cdc, identity()) + sandwich(identity(), cdc));
}

} // namespace ops

DensityMatrix2 DensityMatrix2::ground() {
    DensityMatrix2 r;
    r.m(0, 0) = 1.0;
    return r;
}

cplx simpson(const std::vector<cplx>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return {};
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    const std::size_t intervals = n - 1;
    // odd interval count: Simpson up to n - 4, then the 3/8 rule on the last three
    const std::size_t even = intervals % 2 ? intervals - 3 : intervals;
    cplx sum;
    if (even >= 2) {
        cplx acc = f[0] + f[even];
        for (std::size_t k = 1; k < even; ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
        sum = acc * (h / 3.0);
    }
    if (even != intervals) sum += 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
    return sum;
}

FrameDetunings frame_detunings(const DriveParams& drive, const CavityParams& cavity, double shift,
                               const ModelOptions& options) {
    // User detunings are measured from the shifted line unless asked otherwise;
    // the generator works with omega_X_tilde - omega_L.
    const double offset = options.detuning_reference == DetuningReference::Bare ? shift : 0.0;
    FrameDetunings d{};
    d.delta_tilde = -drive.delta_lx - offset;
    d.cavity_exciton = cavity.delta_xc + offset;
    d.filter_center = options.filter_center == FilterCenter::CavityAbsolute
                          ? cavity.delta_xc - drive.delta_lx
                          : cavity.delta_xc;
    return d;
}

PhononRates phonon_rates(const PhononTables& tables, double eta) {
    if (eta < 0.0) throw ValidationError("eta", "eta must be non-negative");
    PhononRates r{};
    if (tables.params().alpha == 0.0) return r;

    const std::size_t n = tables.phi_samples().size();
    const double h = tables.dtau();
    std::vector<cplx> fx0(n), fxc(n), fxs(n), fy0(n), fyc(n), fys(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto b = tables.bath_at(k);
        const double t = h * static_cast<double>(k);
        const double c = std::cos(eta * t), s = std::sin(eta * t);
        fx0[k] = b.Lxx;
        fxc[k] = b.Lxx * c;
        fxs[k] = b.Lxx * s;
        fy0[k] = b.Lyy;
        fyc[k] = b.Lyy * c;
        fys[k] = b.Lyy * s;
    }
    const auto head = tables.bath_at(0);
    const auto tail = tables.bath_at(n - 1);
    const double scale = std::max(std::abs(head.Lxx), std::abs(head.Lyy));
    if (n > 1 && std::max(std::abs(tail.Lxx), std::abs(tail.Lyy)) > 1e-4 * scale) {
        std::ostringstream msg;
        msg << "phonon rate integrand has not decayed by tau = " << tables.cutoff() << " ps";
        throw NumericalError(msg.str());
    }
    r.gx0 = simpson(fx0, h);
    r.gxc = simpson(fxc, h);
    r.gxs = simpson(fxs, h);
    r.gy0 = simpson(fy0, h);
    r.gyc = simpson(fyc, h);
    r.gys = simpson(fys, h);
    return r;
}

EmRates em_rates(const PhononTables& tables, const CavityParams& cavity, const DriveParams& drive,
                 const ModelOptions& options) {
    const FrameDetunings d = frame_detunings(drive, cavity, tables.polaron_shift(), options);
    const cplx z(0.5 * cavity.kappa, d.cavity_exciton);
    // exp(phi) = 1 + (exp(phi) - 1); the constant part integrates in closed form.
    cplx integral = 1.0 / z;
    const std::size_t n = tables.phi_samples().size();
    if (n > 1) {
        std::vector<cplx> f(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = tables.dtau() * static_cast<double>(k);
            f[k] = (std::exp(tables.phi_at(k)) - 1.0) * std::exp(-z * t);
        }
        integral += simpson(f, tables.dtau());
    }
    EmRates em;
    em.gamma_complex = 2.0 * cavity.g * cavity.g * tables.b_squared() * integral;
    em.gamma_p = em.gamma_complex.real();
    em.lamb_shift = em.gamma_complex.imag();
    return em;
}

Liouvillian::Liouvillian(const Mat4& generator, const LiouvillianInfo& info, double ss_tol)
    : l_(generator), info_(info), ss_tol_(ss_tol) {
    Eigen::ComplexEigenSolver<Mat4> es(l_);
    lambda_ = es.eigenvalues();
    v_ = es.eigenvectors();
    Eigen::JacobiSVD<Mat4> svd(v_);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / std::max(sv(3), 1e-300);
    diagonalizable_ = es.info() == Eigen::Success && cond < 1e10;
    if (diagonalizable_) v_inv_ = v_.inverse();
}

Vec4 Liouvillian::evolve(const Vec4& x, double tau) const {
    if (tau == 0.0) return x;
    if (!diagonalizable_) return (l_ * tau).exp() * x;
    const Vec4 c = v_inv_ * x;
    Vec4 scaled;
    for (int k = 0; k < 4; ++k) scaled(k) = c(k) * std::exp(lambda_(k) * tau);
    return v_ * scaled;
}

std::vector<Vec4> Liouvillian::evolve_grid(const Vec4& x, double dtau, std::size_t count) const {
    std::vector<Vec4> out;
    out.reserve(count);
    if (count == 0) return out;
    if (diagonalizable_) {
        const Vec4 c = v_inv_ * x;
        for (std::size_t j = 0; j < count; ++j) {
            const double t = dtau * static_cast<double>(j);
            Vec4 scaled;
            for (int k = 0; k < 4; ++k) scaled(k) = c(k) * std::exp(lambda_(k) * t);
            out.push_back(v_ * scaled);
        }
        out.front() = x;
        return out;
    }
    const Mat4 step = (l_ * dtau).exp();
    Vec4 cur = x;
    for (std::size_t j = 0; j < count; ++j) {
        out.push_back(cur);
        cur = step * cur;
    }
    return out;
}

DensityMatrix2 Liouvillian::steady_state() const {
    const double scale = std::max(1.0, l_.cwiseAbs().maxCoeff());
    int best = 0;
    int near_zero = 0;
    for (int k = 0; k < 4; ++k) {
        if (std::abs(lambda_(k)) < std::abs(lambda_(best))) best = k;
        if (std::abs(lambda_(k)) < ss_tol_ * scale) ++near_zero;
    }
    if (near_zero > 1) throw NumericalError("steady state is not unique: degenerate null space");

    Vec4 null;
    if (diagonalizable_) {
        null = v_.col(best);
    } else {
        Eigen::FullPivLU<Mat4> lu(l_ - lambda_(best) * Mat4::Identity());
        const auto kernel = lu.kernel();
        if (kernel.cols() != 1) throw NumericalError("steady state is not unique: degenerate null space");
        null = kernel.col(0);
    }
    Mat2 rho = ops::unvec(null);
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw NumericalError("steady state has zero trace");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint());
    return {rho};
}

namespace {

Liouvillian assemble(const PhononTables& tables, const DriveParams& drive, const EmRates& em,
                     double pure_dephasing, const ModelOptions& options, double ss_tol,
                     const CavityParams& cavity) {
    using namespace ops;
    const FrameDetunings d = frame_detunings(drive, cavity, tables.polaron_shift(), options);
    LiouvillianInfo info;
    info.omega = drive.omega;
    info.omega_r = drive.omega * tables.b_factor();
    info.delta_tilde = d.delta_tilde;
    info.eta = std::sqrt(info.delta_tilde * info.delta_tilde + info.omega_r * info.omega_r);
    info.pure_dephasing = pure_dephasing;
    info.em = em;

    const double rabi = options.coherent_rabi == CoherentRabi::Bare ? info.omega : info.omega_r;
    const Mat2 h0 = info.delta_tilde * excited() + 0.5 * rabi * sigma_x();
    Mat4 l = cplx(0.0, -1.0) * commutator(h0);

    if (drive.omega > 0.0 && tables.params().alpha > 0.0 && info.eta > 0.0) {
        const PhononRates r = phonon_rates(tables, info.eta);
        info.phonon = r;
        const double eta = info.eta, dt = info.delta_tilde, wr = info.omega_r;
        const Mat2 chi_x = (dt * wr * (r.gx0 - r.gxc) * sigma_z() +
                            (wr * wr * r.gx0 + dt * dt * r.gxc) * sigma_x() +
                            dt * eta * r.gxs * sigma_y()) /
                           (eta * eta);
        const Mat2 chi_y = (wr * r.gys * sigma_z() - dt * r.gys * sigma_x() + eta * r.gyc * sigma_y()) / eta;
        const double pref = -0.25 * drive.omega * drive.omega;
        const Mat2 pairs[2][2] = {{sigma_x(), chi_x}, {sigma_y(), chi_y}};
        for (const auto& pr : pairs) {
            const Mat2& s = pr[0];
            const Mat2& chi = pr[1];
            const Mat2 chid = chi.adjoint();
            // [s, chi rho] + [rho chi^+, s]
            l += pref * (sandwich(s * chi, identity()) - sandwich(chi, s) +
                         sandwich(identity(), chid * s) - sandwich(s, chid));
        }
    }

    const Mat2 number = excited();
    l += cplx(0.0, -0.5 * em.lamb_shift) * commutator(number);
    l += em.gamma_p * dissipator(sigma());
    if (pure_dephasing > 0.0) l += 2.0 * pure_dephasing * dissipator(number);  // coherences decay at pure_dephasing
    return Liouvillian(l, info, ss_tol);
}

} // namespace

Liouvillian build_liouvillian(const PhononTables& tables, const DriveParams& drive,
                              const CavityParams& cavity, double pure_dephasing,
                              const ModelOptions& options, double ss_tol) {
    return assemble(tables, drive, em_rates(tables, cavity, drive, options), pure_dephasing, options,
                    ss_tol, cavity);
}

Liouvillian build_liouvillian(const PhononTables& tables, const DriveParams& drive, const EmRates& em,
                              double pure_dephasing, const ModelOptions& options, double ss_tol,
                              const CavityParams& cavity) {
    return assemble(tables, drive, em, pure_dephasing, options, ss_tol, cavity);
}

DensityMatrix2 steady_state(const Liouvillian& l) { return l.steady_state(); }

std::vector<DensityMatrix2> propagate(const Liouvillian& l, const DensityMatrix2& rho0,
                                      const std::vector<double>& taus) {
    if (!taus.empty() && taus.front() < 0.0) throw ValidationError("taus", "taus must start at tau >= 0");
    for (std::size_t k = 1; k < taus.size(); ++k) {
        if (taus[k] < taus[k - 1]) throw ValidationError("taus", "taus must be ascending");
    }
    std::vector<DensityMatrix2> out;
    out.reserve(taus.size());
    const Vec4 x = rho0.vec();
    for (double t : taus) out.push_back(DensityMatrix2::from_vec(l.evolve(x, t)));
    return out;
}

} // namespace qds
