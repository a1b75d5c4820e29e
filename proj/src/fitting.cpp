#include "qds/fitting.hpp"

#include "qds/lineshapes.hpp"
#include "qds/phonon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qds {

double FitResult::get(const std::string& name) const {
    for (const auto& [k, v] : params) {
        if (k == name) return v;
    }
    throw std::out_of_range("no fit parameter named " + name);
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const double f = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return (1.0 - f) * ys[k - 1] + f * ys[k];
}

// Which entries of x are squared to keep a reported quantity positive.
struct Transform {
    std::vector<bool> squared;

    double value(const Eigen::VectorXd& x, int i) const {
        return squared[static_cast<std::size_t>(i)] ? x(i) * x(i) : x(i);
    }
    double derivative(const Eigen::VectorXd& x, int i) const {
        return squared[static_cast<std::size_t>(i)] ? 2.0 * x(i) : 1.0;
    }
};

FitResult finish(const LeastSquaresResult& ls, const Transform& tr, const std::vector<std::string>& names,
                 bool weighted) {
    FitResult out;
    const int np = static_cast<int>(ls.x.size());
    for (int i = 0; i < np; ++i) out.params.emplace_back(names[static_cast<std::size_t>(i)], tr.value(ls.x, i));
    const auto m = static_cast<double>(ls.jacobian.rows());
    out.residual_rms = std::sqrt(2.0 * ls.cost / m);
    out.iterations = ls.iterations;
    out.converged = ls.converged && std::isfinite(out.residual_rms);
    out.history = ls.history;
    out.message = ls.status;
    if (ls.jtj_inverse) {
        const double dof = std::max(1.0, m - np);
        const double s2 = weighted ? 1.0 : 2.0 * ls.cost / dof;
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(np, np);
        for (int i = 0; i < np; ++i) d(i, i) = tr.derivative(ls.x, i);
        out.covariance = d * (*ls.jtj_inverse * s2) * d;
    }
    return out;
}

double trapezoid_area(const std::vector<SpectrumSample>& s) {
    double a = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) a += 0.5 * (s[k].counts + s[k - 1].counts) * (s[k].omega - s[k - 1].omega);
    return a;
}

std::size_t argmax(const std::vector<SpectrumSample>& s) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k].counts > s[best].counts) best = k;
    }
    return best;
}

void check_spectrum(const std::vector<SpectrumSample>& s, const char* name) {
    if (s.size() < 8) throw FitError(name, "spectrum needs at least 8 samples");
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (!(s[k].omega > s[k - 1].omega)) throw FitError(name, "spectrum frequencies must increase");
    }
}

} // namespace

std::vector<double> g1_fit_model(const std::vector<double>& taus, double alpha, double nu_c, double temperature,
                                 const FilterSpec& cavity, double dtau) {
    if (taus.empty()) return {};
    if (!(nu_c > 0.0)) throw ValidationError("nu_c", "nu_c must be positive");
    const double tau_end = *std::max_element(taus.begin(), taus.end());
    PhononParams p{std::max(alpha, 0.0), nu_c, temperature};
    NumericsParams n;
    n.dtau = dtau;
    n.tau_max = tau_end + 60.0 / nu_c + 20.0;
    const PhononTables tables(p, n);

    const double end = std::max(tau_end, tables.cutoff()) + 20.0 / cavity.kappa;
    const auto count = static_cast<std::size_t>(std::ceil(end / dtau)) + 2;
    CorrelationTrace g;
    g.dtau = dtau;
    g.values.resize(count);
    for (std::size_t k = 0; k < count; ++k) g.values[k] = tables.G_at(k);
    g.coherent_weight = tables.b_squared();
    g.normalization = 1.0;
    const CorrelationTrace d = detect_g1(g, cavity);

    std::vector<double> grid(count), mag(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = d.tau(k);
        mag[k] = std::abs(d.values[k]) / d.normalization;
    }
    std::vector<double> out;
    out.reserve(taus.size());
    for (double t : taus) {
        if (t < 0.0) throw ValidationError("tau", "tau must be non-negative");
        out.push_back(interpolate(grid, mag, t));
    }
    return out;
}

double g1_fit_model(double tau, double alpha, double nu_c, double temperature, const FilterSpec& cavity, double dtau) {
    return g1_fit_model(std::vector<double>{tau}, alpha, nu_c, temperature, cavity, dtau).front();
}

FitResult fit_phonon_params(const std::vector<FringePoint>& data, const FilterSpec& cavity,
                            std::pair<double, double> init, const PhononFitOptions& options) {
    std::vector<FringePoint> used;
    for (const auto& d : data) {
        if (d.tau >= 0.0 && d.tau <= options.tau_fit_max) used.push_back(d);
    }
    if (used.size() < 8) throw ValidationError("data", "phonon fit needs at least 8 points with tau <= tau_fit_max");
    if (!(init.first >= 0.0) || !(init.second > 0.0)) {
        throw ValidationError("init", "initial alpha must be >= 0 and nu_c > 0");
    }
    const bool weighted = std::all_of(used.begin(), used.end(), [](const FringePoint& p) { return p.err > 0.0; });
    std::vector<double> taus;
    for (const auto& d : used) taus.push_back(d.tau);
    const double scale = 1.0 - options.epsilon;

    LeastSquaresProblem problem;
    problem.parameters = 2;
    problem.residuals = static_cast<int>(used.size());
    problem.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
        const double alpha = x(0) * x(0);
        const double nu_c = x(1) * x(1);
        if (!(nu_c > 1e-6)) {
            r.setConstant(1e6);
            return;
        }
        const auto model = g1_fit_model(taus, alpha, nu_c, options.temperature, cavity, options.dtau);
        for (std::size_t k = 0; k < used.size(); ++k) {
            const double res = scale * model[k] - used[k].v;
            r(static_cast<Eigen::Index>(k)) = weighted ? res / used[k].err : res;
        }
    };
    Eigen::VectorXd x0(2);
    x0 << std::sqrt(std::max(init.first, 1e-6)), std::sqrt(init.second);
    const LeastSquaresResult ls = levenberg_marquardt(problem, x0, options.max_iterations);
    FitResult out = finish(ls, Transform{{true, true}}, {"alpha", "nu_c"}, weighted);
    out.at_lower_bound = out.get("alpha") < 1e-3 * std::max(init.first, 1e-3);
    if (out.at_lower_bound) out.message += "; alpha at lower bound";
    return out;
}

EmissionFractions extract_fractions_from_plateaus(const std::vector<double>& taus, const std::vector<double>& v,
                                                  const PlateauMarkers& markers, PlateauMode mode) {
    if (taus.size() != v.size() || taus.size() < 4) throw ValidationError("v", "need matching tau and v samples");
    const double t_end = taus.back();
    if (!(markers.t_phonon > 0.0 && markers.t_phonon < markers.t_rad && markers.t_rad < t_end)) {
        throw ValidationError("markers", "markers must satisfy 0 < t_phonon < t_rad < tau_max");
    }
    const double v0 = v.front();
    if (!(v0 > 0.0)) throw NumericalError("no emission: v(0) = 0");

    // Plateau: the last fifth of the trace, never earlier than t_rad.
    const double start = std::max(markers.t_rad, 0.8 * t_end);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] < start) continue;
        sx += taus[k];
        sy += v[k];
        sxx += taus[k] * taus[k];
        sxy += taus[k] * v[k];
        cnt += 1;
    }
    if (cnt < 2) throw ValidationError("v", "too few samples in the plateau window");
    const double plateau = sy / cnt;
    const double var = sxx / cnt - (sx / cnt) * (sx / cnt);
    const double slope = var > 0 ? (sxy / cnt - (sx / cnt) * (sy / cnt)) / var : 0.0;
    if (std::abs(slope) * (t_end - start) > 0.01 * v0) {
        std::ostringstream msg;
        msg << "trace has not plateaued: drift " << slope * (t_end - start) << " over the last " << t_end - start
            << " ps";
        throw NumericalError(msg.str());
    }

    double zpl = interpolate(taus, v, markers.t_phonon);
    if (mode == PlateauMode::Extrapolated) {
        // log(v - plateau) = a + b tau on [t_phonon, t_rad], weighted by the excess.
        double w = 0, wx = 0, wy = 0, wxx = 0, wxy = 0;
        int used = 0;
        for (std::size_t k = 0; k < taus.size(); ++k) {
            if (taus[k] < markers.t_phonon || taus[k] > markers.t_rad) continue;
            const double y = v[k] - plateau;
            if (y <= 1e-3 * v0) continue;
            const double wt = y * y;
            const double ly = std::log(y);
            w += wt;
            wx += wt * taus[k];
            wy += wt * ly;
            wxx += wt * taus[k] * taus[k];
            wxy += wt * taus[k] * ly;
            ++used;
        }
        const double det = w * wxx - wx * wx;
        if (used >= 3 && det > 0.0) {
            const double b = (w * wxy - wx * wy) / det;
            const double a = (wy - b * wx) / w;
            if (b < 0.0) zpl = plateau + std::exp(a);
        }
    }
    EmissionFractions f;
    f.f_psb = 1.0 - zpl / v0;
    f.f_cs = plateau / v0;
    f.f_inc = 1.0 - f.f_psb - f.f_cs;
    f.p_tot = v0;
    f.p_coh = plateau;
    f.p_psb = v0 - zpl;
    f.p_inc = zpl - plateau;
    return f;
}

namespace {

// Relative weights 1/counts (a semi-log fit), floored at 1e-3 of the peak so
// empty bins do not dominate.
std::vector<double> relative_weights(const std::vector<SpectrumSample>& s) {
    double peak = 0.0;
    for (const auto& p : s) peak = std::max(peak, std::abs(p.counts));
    std::vector<double> w;
    for (const auto& p : s) w.push_back(1.0 / std::max(std::abs(p.counts), 1e-3 * peak));
    return w;
}

} // namespace

AreaFitResult area_fractions_from_spectra(const std::vector<SpectrumSample>& low_res,
                                          const std::vector<SpectrumSample>& high_res,
                                          const AreaFitOptions& options) {
    check_spectrum(low_res, "low_res");
    check_spectrum(high_res, "high_res");
    if (!(options.low_res_fwhm > 0.0)) throw ValidationError("low_res_fwhm", "low-resolution instrument FWHM must be positive");
    AreaFitResult out;

    // Low resolution: Voigt zero-phonon line (Gaussian part fixed) + Gaussian sideband.
    {
        const auto& s = low_res;
        const double fw = options.low_res_fwhm;
        const double c0 = s[argmax(s)].omega;
        const double total = trapezoid_area(s);
        double sw = 0, swx = 0, swxx = 0;
        std::vector<SpectrumSample> wing;
        for (const auto& p : s) {
            if (std::abs(p.omega - c0) < 3.0 * fw) continue;
            wing.push_back(p);
            sw += p.counts;
            swx += p.counts * p.omega;
            swxx += p.counts * p.omega * p.omega;
        }
        double c1 = c0, w1 = 1.0, a1 = 0.05 * total;
        if (sw > 0.0 && wing.size() > 4) {
            c1 = swx / sw;
            w1 = std::max(2.355 * std::sqrt(std::max(swxx / sw - c1 * c1, 1e-12)), 2.0 * fw);
            a1 = std::max(trapezoid_area(wing), 1e-6 * total);
        }
        const double a0 = std::max(total - a1, 1e-6 * total);

        LeastSquaresProblem prob;
        prob.parameters = 6;
        prob.residuals = static_cast<int>(s.size());
        const std::vector<double> weight = relative_weights(s);
        prob.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
            for (std::size_t k = 0; k < s.size(); ++k) {
                const double w = s[k].omega;
                const double m = voigt(w, x(0), fw, x(1) * x(1), x(2) * x(2)) + gaussian(w, x(3), x(4) * x(4), x(5) * x(5));
                r(static_cast<Eigen::Index>(k)) = (m - s[k].counts) * weight[k];
            }
        };
        Eigen::VectorXd x0(6);
        x0 << c0, std::sqrt(0.1 * fw), std::sqrt(a0), c1, std::sqrt(w1), std::sqrt(a1);
        const auto ls = levenberg_marquardt(prob, x0, options.max_iterations);
        out.low_res = finish(ls, Transform{{false, true, true, false, true, true}},
                             {"zpl_center", "zpl_lorentz_fwhm", "zpl_area", "psb_center", "psb_fwhm", "psb_area"}, false);
        if (!ls.x.allFinite()) throw FitError("low_res", "fit diverged");
        if (!out.low_res.converged) throw FitError("low_res", "fit did not converge (" + ls.status + ")");
    }

    // High resolution: Lorentzian incoherent line + Gaussian coherent line,
    // with replicas one free spectral range away when requested.
    {
        const auto& s = high_res;
        const bool free_width = !(options.high_res_fwhm > 0.0);
        const double spacing = (s.back().omega - s.front().omega) / static_cast<double>(s.size() - 1);
        const double fw0 = free_width ? 2.0 * spacing : options.high_res_fwhm;
        const std::size_t ip = argmax(s);
        const double c = s[ip].omega;
        double base = 0.0;
        int nb = 0;
        for (const auto& p : s) {
            const double d = std::abs(p.omega - c);
            if (d > 4.0 * fw0 && d < 8.0 * fw0) {
                base += p.counts;
                ++nb;
            }
        }
        base = nb ? base / nb : 0.5 * s[ip].counts;
        const double total = trapezoid_area(s);
        const double a_g = std::max((s[ip].counts - base) * fw0 * 1.0645, 1e-6 * total);
        const double a_l = std::max(total - a_g, 1e-6 * total);
        const double fw_l = base > 0.0 ? std::max(2.0 * a_l / (constants::pi * base), 2.0 * fw0) : 10.0 * fw0;

        const std::vector<int> images = options.fsr > 0.0 ? std::vector<int>{-1, 0, 1} : std::vector<int>{0};
        const std::vector<double> weight = relative_weights(s);
        LeastSquaresProblem prob;
        prob.parameters = free_width ? 6 : 5;
        prob.residuals = static_cast<int>(s.size());
        prob.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
            const double gw = free_width ? x(4) * x(4) : options.high_res_fwhm;
            const double ag = free_width ? x(5) * x(5) : x(4) * x(4);
            for (std::size_t k = 0; k < s.size(); ++k) {
                double m = 0.0;
                for (int n : images) {
                    const double w = s[k].omega - n * options.fsr;
                    m += lorentzian(w, x(0), x(1) * x(1), x(2) * x(2)) + gaussian(w, x(3), gw, ag);
                }
                r(static_cast<Eigen::Index>(k)) = (m - s[k].counts) * weight[k];
            }
        };
        Eigen::VectorXd x0(prob.parameters);
        if (free_width) {
            x0 << c, std::sqrt(fw_l), std::sqrt(a_l), c, std::sqrt(fw0), std::sqrt(a_g);
        } else {
            x0 << c, std::sqrt(fw_l), std::sqrt(a_l), c, std::sqrt(a_g);
        }
        const auto ls = levenberg_marquardt(prob, x0, options.max_iterations);
        if (free_width) {
            out.high_res = finish(ls, Transform{{false, true, true, false, true, true}},
                                  {"inc_center", "inc_fwhm", "inc_area", "cs_center", "cs_fwhm", "cs_area"}, false);
        } else {
            out.high_res = finish(ls, Transform{{false, true, true, false, true}},
                                  {"inc_center", "inc_fwhm", "inc_area", "cs_center", "cs_area"}, false);
            out.high_res.params.insert(out.high_res.params.begin() + 4, {"cs_fwhm", options.high_res_fwhm});
        }
        if (!ls.x.allFinite()) throw FitError("high_res", "fit diverged");
        if (!out.high_res.converged) throw FitError("high_res", "fit did not converge (" + ls.status + ")");
    }

    const double a_zpl = out.low_res.get("zpl_area");
    const double a_psb = out.low_res.get("psb_area");
    const double a_cs = out.high_res.get("cs_area");
    const double a_inc = out.high_res.get("inc_area");
    const double zpl_share = a_zpl / (a_zpl + a_psb);
    EmissionFractions& f = out.fractions;
    f.f_psb = a_psb / (a_psb + a_zpl);
    f.f_cs = a_cs / (a_cs + a_inc) * zpl_share;
    f.f_inc = a_inc / (a_cs + a_inc) * zpl_share;
    f.p_tot = 1.0;
    f.p_coh = f.f_cs;
    f.p_inc = f.f_inc;
    f.p_psb = f.f_psb;
    return out;
}

} // namespace qds
