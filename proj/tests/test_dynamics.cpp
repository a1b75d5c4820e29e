#include "oracles.hpp"

#include "qds/dynamics.hpp"
#include "qds/units.hpp"

#include "approx.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace qds;

namespace {

const PhononParams nominal{};
const PhononParams no_phonons{0.0, 1.28, 4.2};

// Row-major vectorization written out by hand.
Vec4 flat(const Mat2& m) { return Vec4(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }
Mat2 square(const Vec4& v) {
    Mat2 m;
    m << v(0), v(1), v(2), v(3);
    return m;
}

Mat4 bloch_generator(double d, double w, double gamma_p, double s, double gamma) {
    Mat4 out;
    for (int j = 0; j < 4; ++j) {
        Vec4 e = Vec4::Zero();
        e(j) = 1.0;
        out.col(j) = flat(oracle::bloch_rhs(square(e), d, w, gamma_p, s, gamma));
    }
    return out;
}

Mat2 random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Mat2 a;
    a << cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng));
    Mat2 rho = a * a.adjoint();
    return rho / rho.trace();
}

// 2 g^2 B^2 int exp(phi) exp(-z t) dt and the six phonon rates, by trapezoid on
// oracle phi with one Richardson step.
struct OracleRates {
    cplx gamma;
    cplx gx0, gxc, gxs, gy0, gyc, gys;
};

const std::vector<cplx>& fine_phi() {
    static const std::vector<cplx> phi = [] {
        std::vector<cplx> out;
        for (int k = 0; k <= 8000; ++k) out.push_back(oracle::phi(0.005 * k, nominal.alpha, nominal.nu_c, nominal.temperature, 20001));
        return out;
    }();
    return phi;
}

OracleRates oracle_rates(double g, double kappa, double cav_det, double eta) {
    const auto& phi = fine_phi();
    const double b2 = std::exp(-phi[0].real());
    auto integrate = [&](auto f) {
        std::vector<cplx> fine, coarse;
        for (std::size_t k = 0; k < phi.size(); ++k) {
            const cplx v = f(0.005 * k, phi[k]);
            fine.push_back(v);
            if (k % 2 == 0) coarse.push_back(v);
        }
        return (4.0 * oracle::trapezoid(fine, 0.005) - oracle::trapezoid(coarse, 0.01)) / 3.0;
    };
    const cplx z(0.5 * kappa, cav_det);
    OracleRates r;
    r.gamma = 2.0 * g * g * b2 * integrate([&](double t, cplx p) { return std::exp(p - z * t); });
    auto lxx = [&](cplx p) { return b2 * (std::exp(p) + std::exp(-p) - 2.0); };
    auto lyy = [&](cplx p) { return b2 * (std::exp(p) - std::exp(-p)); };
    r.gx0 = integrate([&](double, cplx p) { return lxx(p); });
    r.gxc = integrate([&](double t, cplx p) { return lxx(p) * std::cos(eta * t); });
    r.gxs = integrate([&](double t, cplx p) { return lxx(p) * std::sin(eta * t); });
    r.gy0 = integrate([&](double, cplx p) { return lyy(p); });
    r.gyc = integrate([&](double t, cplx p) { return lyy(p) * std::cos(eta * t); });
    r.gys = integrate([&](double t, cplx p) { return lyy(p) * std::sin(eta * t); });
    return r;
}

} // namespace

TEST_CASE("vectorization helpers are row-major") {
    std::mt19937_64 rng(1);
    const Mat2 a = random_state(rng), b = random_state(rng), rho = random_state(rng);
    CHECK((ops::vec(rho) - flat(rho)).norm() < 1e-15);
    CHECK((ops::unvec(flat(rho)) - rho).norm() < 1e-15);
    CHECK((ops::sandwich(a, b) * flat(rho) - flat(a * rho * b)).norm() < 1e-12);
    CHECK((ops::commutator(a) * flat(rho) - flat(a * rho - rho * a)).norm() < 1e-12);
    const Mat2 c = ops::sigma();
    const Mat2 expect = c * rho * c.adjoint() - 0.5 * (c.adjoint() * c * rho + rho * c.adjoint() * c);
    CHECK((ops::dissipator(c) * flat(rho) - flat(expect)).norm() < 1e-12);
    CHECK(ops::sigma()(0, 1) == cplx(1.0));
    CHECK(ops::sigma_z()(1, 1) == cplx(1.0));
}

TEST_CASE("phonon rates vanish without coupling and obey the eta = 0 limits") {
    const PhononTables free(no_phonons);
    const PhononRates r0 = phonon_rates(free, 0.3);
    CHECK(r0.gx0 == cplx{});
    CHECK(r0.gys == cplx{});
    const PhononTables t(nominal);
    const PhononRates r = phonon_rates(t, 0.0);
    CHECK(std::abs(r.gxc - r.gx0) < 1e-15);
    CHECK(std::abs(r.gyc - r.gy0) < 1e-15);
    CHECK(std::abs(r.gxs) == 0.0);
    CHECK(std::abs(r.gys) == 0.0);
    CHECK_THROWS_AS(phonon_rates(t, -1.0), ValidationError);
}

TEST_CASE("phonon rates agree with brute-force quadrature") {
    const PhononTables t(nominal);
    const double eta = uev_to_angfreq(25.6) * t.b_factor();
    const PhononRates r = phonon_rates(t, eta);
    const OracleRates o = oracle_rates(1.0, 1.0, 0.0, eta);
    CHECK(r.gx0.real() > 0.0);
    CHECK(std::abs(r.gx0 - o.gx0) < 1e-6);
    CHECK(std::abs(r.gxc - o.gxc) < 1e-6);
    CHECK(std::abs(r.gxs - o.gxs) < 1e-6);
    CHECK(std::abs(r.gy0 - o.gy0) < 1e-6);
    CHECK(std::abs(r.gyc - o.gyc) < 1e-6);
    CHECK(std::abs(r.gys - o.gys) < 1e-6);
    const PhononRates fast = phonon_rates(t, 2.0);
    const OracleRates of = oracle_rates(1.0, 1.0, 0.0, 2.0);
    CHECK(std::abs(fast.gxs - of.gxs) < 1e-6);
    CHECK(std::abs(fast.gys - of.gys) < 1e-6);
}

TEST_CASE("electromagnetic rates") {
    const CavityParams cav{};
    const EmRates free = em_rates(PhononTables(no_phonons), cav, {});
    CHECK(free.gamma_p == approx(4.0 * cav.g * cav.g / cav.kappa).epsilon(1e-12));
    CHECK(free.gamma_p == approx(0.0441).epsilon(1e-3));
    CHECK(1.0 / free.gamma_p == approx(22.7).epsilon(2e-3));
    CHECK(std::abs(free.lamb_shift) < 1e-15);
    CHECK(free.gamma_complex.real() == free.gamma_p);

    CavityParams detuned = cav;
    detuned.delta_xc = 1.0;
    const EmRates off = em_rates(PhononTables(no_phonons), detuned, {});
    const cplx z(0.5 * cav.kappa, 1.0);
    CHECK(std::abs(off.gamma_complex - 2.0 * cav.g * cav.g / z) < 1e-14);

    const PhononTables t(nominal);
    for (double dxc : {0.0, 0.5, -1.5}) {
        CavityParams c = cav;
        c.delta_xc = dxc;
        const EmRates em = em_rates(t, c, {});
        const OracleRates o = oracle_rates(c.g, c.kappa, dxc, 0.0);
        CAPTURE(dxc);
        CHECK(std::abs(em.gamma_complex - o.gamma) < 1e-7);
        CHECK(em.lamb_shift == em.gamma_complex.imag());
    }
    // bare reference moves the cavity by the polaron shift
    ModelOptions bare;
    bare.detuning_reference = DetuningReference::Bare;
    const EmRates eb = em_rates(t, cav, {}, bare);
    const OracleRates ob = oracle_rates(cav.g, cav.kappa, t.polaron_shift(), 0.0);
    CHECK(std::abs(eb.gamma_complex - ob.gamma) < 1e-7);
}

TEST_CASE("frame detunings") {
    const DriveParams d{0.1, 0.3};
    const CavityParams c{0.2, 3.8, -0.2};
    const FrameDetunings f = frame_detunings(d, c, 0.04);
    CHECK(f.delta_tilde == -0.3);
    CHECK(f.cavity_exciton == -0.2);
    CHECK(f.filter_center == approx(-0.5));
    ModelOptions o;
    o.detuning_reference = DetuningReference::Bare;
    o.filter_center = FilterCenter::ExcitonRelative;
    const FrameDetunings b = frame_detunings(d, c, 0.04, o);
    CHECK(b.delta_tilde == approx(-0.34));
    CHECK(b.cavity_exciton == approx(-0.16));
    CHECK(b.filter_center == -0.2);
}

TEST_CASE("without phonons the generator is the optical Bloch generator") {
    const PhononTables t(no_phonons);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double omega = 0.2 * std::abs(u(rng));
        const double delta_lx = 0.3 * u(rng);
        const double gp = 0.02 + 0.05 * std::abs(u(rng));
        const double s = 0.01 * u(rng);
        const double gamma = i % 2 ? 0.0 : 0.03 * std::abs(u(rng));
        EmRates em;
        em.gamma_p = gp;
        em.lamb_shift = s;
        em.gamma_complex = cplx(gp, s);
        const Liouvillian l = build_liouvillian(t, {omega, delta_lx}, em, gamma);
        const Mat4 ref = bloch_generator(-delta_lx, omega, gp, s, gamma);
        CHECK((l.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);

        const double pop = l.steady_state().rxx().real();
        // closed form with the Lamb shift folded into the detuning
        CHECK(pop == approx(oracle::bloch_population(omega, -delta_lx + 0.5 * s, gp, gamma)).epsilon(1e-9));
    }
}

TEST_CASE("undriven emitter relaxes to the ground state") {
    const PhononTables t(no_phonons);
    const Liouvillian l = build_liouvillian(t, {0.0, 0.0}, CavityParams{}, 0.01);
    const DensityMatrix2 ss = l.steady_state();
    CHECK(std::abs(ss.r00() - 1.0) < 1e-12);
    CHECK(std::abs(ss.rxx()) < 1e-12);
    const double gp = l.info().em.gamma_p;
    std::vector<double> re;
    for (int k = 0; k < 4; ++k) re.push_back(l.eigenvalues()(k).real());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == approx(-gp).epsilon(1e-10));
    CHECK(re[1] == approx(-0.5 * gp - 0.01).epsilon(1e-10));
    CHECK(re[2] == approx(-0.5 * gp - 0.01).epsilon(1e-10));
    CHECK(std::abs(re[3]) < 1e-12);
}

TEST_CASE("strong resonant drive saturates at one half") {
    const PhononTables t(no_phonons);
    NumericsParams n;
    const Liouvillian l = build_liouvillian(t, {3.0, 0.0}, CavityParams{}, 0.0);
    CHECK(l.steady_state().rxx().real() == approx(0.5).epsilon(1e-3));
}

TEST_CASE("generator preserves trace and hermiticity") {
    const PhononTables t(nominal);
    std::mt19937_64 rng(9);
    const Liouvillian l = build_liouvillian(t, {0.3, -0.2}, CavityParams{}, 0.01);
    for (int i = 0; i < 10; ++i) {
        const Mat2 rho = random_state(rng);
        const Mat2 d = square(l.matrix() * flat(rho));
        CHECK(std::abs(d.trace()) < 1e-12);
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
    const LiouvillianInfo& info = l.info();
    CHECK(info.omega_r == approx(0.3 * t.b_factor()).epsilon(1e-15));
    CHECK(info.eta * info.eta == approx(info.delta_tilde * info.delta_tilde + info.omega_r * info.omega_r).epsilon(1e-14));
    int near_zero = 0;
    for (int k = 0; k < 4; ++k) near_zero += std::abs(l.eigenvalues()(k)) < l.ss_tol();
    CHECK(near_zero == 1);
}

TEST_CASE("propagation matches a step integrator and forgets the initial state") {
    const PhononTables t(nominal);
    const Liouvillian l = build_liouvillian(t, {uev_to_angfreq(25.6), 0.0}, CavityParams{}, 0.0);
    const Mat4 gen = l.matrix();
    const DensityMatrix2 start = DensityMatrix2::ground();
    const double h = 0.002;
    const auto ref = oracle::rk4([&](const Mat2& x) { return square(gen * flat(x)); }, start.m, h, 100000, 1000);
    std::vector<double> taus;
    for (std::size_t k = 0; k < ref.size(); ++k) taus.push_back(2.0 * k);
    const auto got = propagate(l, start, taus);
    REQUIRE(got.size() == ref.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        worst = std::max(worst, (got[k].m - ref[k]).cwiseAbs().maxCoeff());
        CHECK(std::abs(got[k].trace() - 1.0) < 1e-10);
        CHECK((got[k].m - got[k].m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(worst < 1e-6);
    CHECK((propagate(l, start, {0.0})[0].m - start.m).norm() < 1e-14);

    std::mt19937_64 rng(2);
    // coherences relax at about Gamma_P / 2, so wait 20 slowest lifetimes
    double slowest = 1e300;
    for (int k = 0; k < 4; ++k) {
        const double r = -l.eigenvalues()(k).real();
        if (r > l.ss_tol()) slowest = std::min(slowest, r);
    }
    CHECK(slowest < l.info().em.gamma_p);
    const double late = 20.0 / slowest;
    const auto a = propagate(l, {random_state(rng)}, {late});
    const auto b = propagate(l, {random_state(rng)}, {late});
    CHECK((a[0].m - b[0].m).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((a[0].m - l.steady_state().m).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("simpson rule") {
    std::vector<cplx> f;
    for (int k = 0; k <= 10; ++k) f.push_back(std::pow(0.1 * k, 3));
    CHECK(simpson(f, 0.1).real() == approx(0.25).epsilon(1e-13));
    f.push_back(std::pow(1.1, 3));
    CHECK(simpson(f, 0.1).real() == approx(std::pow(1.1, 4) / 4).epsilon(1e-13));
    f.resize(4);
    CHECK(simpson(f, 0.1).real() == approx(std::pow(0.3, 4) / 4).epsilon(1e-13));
    f.resize(2);
    CHECK(simpson(f, 0.1).real() == approx(0.5 * 0.1 * 0.001).epsilon(1e-13));
}
