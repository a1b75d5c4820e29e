#include "qds/scenarios.hpp"

#include "qds/atomic.hpp"
#include "qds/io.hpp"
#include "qds/lineshapes.hpp"
#include "qds/noise.hpp"
#include "qds/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace qds {

namespace {

using Json = nlohmann::ordered_json;

// Everything a scenario produces, keyed by file name; written in one pass at the end.
struct Outputs {
    std::map<std::string, std::string> files;

    void csv(const std::string& name, const std::vector<std::string>& header, const CsvTable& t) {
        files[name] = render_csv(header, t);
    }
    void json(const std::string& name, const Json& doc) { files[name] = doc.dump(2) + "\n"; }
};

struct Context {
    const RunConfig& cfg;
    const ScenarioOptions& opt;
    std::string scenario;
    Outputs out;
    std::vector<std::string> header;

    Context(const RunConfig& c, const ScenarioOptions& o, std::string name)
        : cfg(c), opt(o), scenario(std::move(name)), header(metadata_lines(c, scenario)) {}

    Json wrap(const Json& payload) const { return with_metadata(cfg, scenario, payload); }
    void log(const std::string& msg) const {
        if (opt.verbose) std::cerr << "[" << scenario << "] " << msg << "\n";
    }
};

Json warnings_json(const std::vector<Diagnostic>& ws) {
    Json arr = Json::array();
    for (const auto& w : ws) arr.push_back({{"field", w.field}, {"message", w.message}});
    return arr;
}

void report(const std::vector<Diagnostic>& ws) {
    for (const auto& w : ws) std::cerr << "warning: " << w.field << ": " << w.message << "\n";
}

Json fractions_json(const EmissionFractions& f) {
    return {{"f_cs", f.f_cs}, {"f_inc", f.f_inc}, {"f_psb", f.f_psb},
            {"p_coh", f.p_coh}, {"p_inc", f.p_inc}, {"p_psb", f.p_psb}, {"p_tot", f.p_tot}};
}

Json fit_json(const FitResult& r) {
    Json j;
    for (const auto& [k, v] : r.params) j["params"][k] = v;
    j["residual_rms"] = r.residual_rms;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["at_lower_bound"] = r.at_lower_bound;
    if (r.covariance) {
        Json cov = Json::array();
        for (Eigen::Index i = 0; i < r.covariance->rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index k = 0; k < r.covariance->cols(); ++k) row.push_back((*r.covariance)(i, k));
            cov.push_back(row);
        }
        j["covariance"] = cov;
    } else {
        j["covariance"] = nullptr;
    }
    j["history"] = r.history;
    j["message"] = r.message;
    return j;
}

Json info_json(const PointResult& r, const PhononTables& t) {
    const auto& i = r.info;
    auto cj = [](cplx z) { return Json::array({z.real(), z.imag()}); };
    return {{"omega", i.omega},
            {"omega_r", i.omega_r},
            {"delta_tilde", i.delta_tilde},
            {"eta", i.eta},
            {"pure_dephasing", i.pure_dephasing},
            {"gamma_p", i.em.gamma_p},
            {"lamb_shift", i.em.lamb_shift},
            {"b_factor", t.b_factor()},
            {"polaron_shift", t.polaron_shift()},
            {"phonon_table_cutoff", t.cutoff()},
            {"diagonalizable", r.diagonalizable},
            {"rho_xx", r.rho.rxx().real()},
            {"rho_x0", cj(r.rho.rx0())},
            {"phonon_rates",
             {{"gx0", cj(i.phonon.gx0)}, {"gxc", cj(i.phonon.gxc)}, {"gxs", cj(i.phonon.gxs)},
              {"gy0", cj(i.phonon.gy0)}, {"gyc", cj(i.phonon.gyc)}, {"gys", cj(i.phonon.gys)}}}};
}

CsvTable trace_table(const CorrelationTrace& g, const std::vector<double>& v, int stride) {
    CsvTable t{{"tau_ps", "re_g1", "im_g1", "abs_g1_norm", "v"}, {}};
    const double g0 = g.normalization > 0.0 ? g.normalization : 1.0;
    for (std::size_t k = 0; k < g.size(); k += static_cast<std::size_t>(stride)) {
        t.rows.push_back({g.tau(k), g.values[k].real(), g.values[k].imag(), std::abs(g.values[k]) / g0, v[k]});
    }
    return t;
}

CsvTable spectrum_table(const SpectrumResult& s, double window, double offset) {
    CsvTable t{{"omega_ps_inv", "omega_meV", "s_opt", "s_sb", "s_total_filtered"}, {}};
    for (std::size_t i = 0; i < s.omegas.size(); ++i) {
        const double w = s.omegas[i] + offset;
        if (std::abs(w) > window) continue;
        t.rows.push_back({w, angfreq_to_mev(w), s.s_opt[i], s.s_sb[i], s.filtered_total(i)});
    }
    return t;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const double u = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + u * (ys[k] - ys[k - 1]);
}

std::string detuning_tag(double delta) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%+.3fmeV", angfreq_to_mev(delta));
    return buf;
}

// Detected trace (filter, then instrument envelope) for a point result.
CorrelationTrace measured_trace(const PointResult& r, const CorrelationTrace& g_pol, const NoiseParams& noise) {
    CorrelationTrace g = r.filter ? detect_g1(g_pol, *r.filter) : g_pol;
    if (noise.instrument_dtau > 0.0 || noise.laser_mu > 0.0) g = apply_instrument_response(g, noise);
    return g;
}

AtomicParams atomic_counterpart(const PointResult& r) {
    AtomicParams a;
    a.t1 = 1.0 / r.info.em.gamma_p;
    a.t2 = 1.0 / (0.5 * r.info.em.gamma_p + r.info.pure_dephasing);
    a.omega = r.info.omega_r;
    a.delta_lx = r.info.delta_tilde;
    return a;
}

// ---------------------------------------------------------------- g1-trace

void run_g1_trace(Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    const ValidatedParams p = resolve_drive(cfg, tables);
    PointRequest req;
    req.pure_dephasing = point_dephasing(p, tables);
    const PointResult r = evaluate_point(p, tables, req);
    report(r.warnings);
    ctx.log("steady state found, rho_xx = " + format_number(r.rho.rxx().real()));

    const CorrelationTrace g = measured_trace(r, r.g_pol, p.noise);
    const std::vector<double> v = fringe_contrast(g, p.noise.epsilon);

    const AtomicParams ap = atomic_counterpart(r);
    const AtomicResult atomic = atomic_g1_and_spectrum(ap, p.numerics);
    const CorrelationTrace ga = measured_trace(r, atomic.trace, p.noise);
    const std::vector<double> va = fringe_contrast(ga, p.noise.epsilon);

    const int stride = cfg.output.stride;
    ctx.out.csv("g1_polaron.csv", ctx.header, trace_table(g, v, stride));
    ctx.out.csv("g1_atomic.csv", ctx.header, trace_table(ga, va, stride));
    CsvTable fringe{{"tau_ps", "v", "v_atomic"}, {}};
    for (std::size_t k = 0; k < g.size(); k += static_cast<std::size_t>(stride)) {
        fringe.rows.push_back({g.tau(k), v[k], va[k]});
    }
    ctx.out.csv("fringe.csv", ctx.header, fringe);

    std::vector<double> taus(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) taus[k] = g.tau(k);
    Json doc;
    doc["saturation"] = saturation_label(r.info.omega_r, r.info.delta_tilde, r.info.em.gamma_p);
    doc["fractions"] = fractions_json(r.fractions);
    Json plateau;
    for (auto [mode, name] : {std::pair{PlateauMode::AtMarker, "at_marker"},
                              std::pair{PlateauMode::Extrapolated, "extrapolated"}}) {
        try {
            const auto f = extract_fractions_from_plateaus(taus, v, {cfg.fit.t_phonon, cfg.fit.t_rad}, mode);
            plateau[name] = {{"f_cs", f.f_cs}, {"f_inc", f.f_inc}, {"f_psb", f.f_psb}};
        } catch (const std::exception& e) {
            plateau[name] = {{"error", e.what()}};
        }
    }
    doc["plateau_fractions"] = plateau;
    Json fr;
    fr["epsilon"] = p.noise.epsilon;
    fr["v_t_phonon"] = interpolate(taus, v, cfg.fit.t_phonon);
    fr["v_tau_max"] = v.back();
    if (taus.back() >= 500.0) fr["v_500ps"] = interpolate(taus, v, 500.0);
    doc["fringe"] = fr;
    doc["atomic"] = {{"t1", ap.t1},
                     {"t2", ap.t2},
                     {"f_cs_closed_form", coherent_fraction_atomic(ap)},
                     {"f_cs_master_equation", atomic.fractions.f_cs}};
    doc["warnings"] = warnings_json(r.warnings);
    ctx.out.json("fractions.json", ctx.wrap(doc));

    if (ctx.opt.dump_phonon) {
        CsvTable ph{{"tau_ps", "re_phi", "im_phi", "re_G", "im_G"}, {}};
        const auto& s = tables.phi_samples();
        for (std::size_t k = 0; k < s.size(); k += static_cast<std::size_t>(stride)) {
            const cplx gk = tables.G_at(k);
            ph.rows.push_back({tables.dtau() * static_cast<double>(k), s[k].real(), s[k].imag(), gk.real(), gk.imag()});
        }
        ctx.out.csv("phonon.csv", ctx.header, ph);
    }
    if (ctx.opt.verbose) ctx.out.json("diagnostics.json", ctx.wrap({{"point", info_json(r, tables)}}));
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    const ValidatedParams p = resolve_drive(cfg, tables);
    PointRequest req;
    req.pure_dephasing = point_dephasing(p, tables);
    req.keep_spectrum = true;
    const PointResult r = evaluate_point(p, tables, req);
    report(r.warnings);
    if (!r.spectrum) throw NumericalError("no emission: the emitter is not driven");
    const double offset = cfg.output.center_on_exciton ? p.drive.delta_lx : 0.0;
    ctx.out.csv("spectrum.csv", ctx.header, spectrum_table(*r.spectrum, cfg.output.spectrum_window, offset));
    Json doc;
    doc["axis"] = cfg.output.center_on_exciton ? "emitted minus exciton" : "emitted minus laser";
    doc["coherent_weight"] = r.spectrum->coherent_weight;
    doc["filter_applied"] = r.spectrum->filter_applied;
    doc["fractions"] = fractions_json(r.fractions);
    doc["warnings"] = warnings_json(r.warnings);
    ctx.out.json("spectrum.json", ctx.wrap(doc));
    if (ctx.opt.verbose) ctx.out.json("diagnostics.json", ctx.wrap({{"point", info_json(r, tables)}}));
}

// ---------------------------------------------------------------- sweeps

void run_saturation_sweep(Context& ctx) {
    const auto rows = saturation_sweep(ctx.cfg, ctx.opt.workers);
    CsvTable t{{"s", "omega", "f_cs", "f_inc", "f_psb", "f_cs_atomic"}, {}};
    for (const auto& r : rows) t.rows.push_back({r.s, r.omega, r.f_cs, r.f_inc, r.f_psb, r.f_cs_atomic});
    ctx.out.csv("saturation_sweep.csv", ctx.header, t);
}

void run_detuning_sweep(Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const DetuningSweep sweep = detuning_sweep(cfg, ctx.opt.workers);
    CsvTable t{{"delta_meV", "p_tot", "p_coh", "f_cs_raw", "f_cs_dephased", "f_cs_wandered"}, {}};
    for (const auto& r : sweep.rows) {
        t.rows.push_back({angfreq_to_mev(r.delta), r.p_tot, r.p_coh, r.f_cs_raw, r.f_cs_dephased, r.f_cs_wandered});
    }
    ctx.out.csv("detuning_sweep.csv", ctx.header, t);

    const auto& picks = cfg.sweep.spectrum_detunings;
    if (picks.empty()) return;
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    std::vector<SpectrumResult> spectra(picks.size());
    parallel_for(picks.size(), ctx.opt.workers, [&](std::size_t i) {
        RunConfig c = cfg;
        c.drive.delta_lx = picks[i];
        const ValidatedParams p = resolve_drive(c, tables);
        PointRequest req;
        req.keep_spectrum = true;
        if (cfg.sweep.dephasing) req.pure_dephasing = gamma_of_detuning(p.drive.delta_lx, p.noise, sweep.gamma_p);
        PointResult r = evaluate_point(p, tables, req);
        if (!r.spectrum) throw NumericalError("no emission at delta_lx = " + detuning_tag(picks[i]));
        spectra[i] = std::move(*r.spectrum);
    });
    for (std::size_t i = 0; i < picks.size(); ++i) {
        const double offset = cfg.output.center_on_exciton ? picks[i] : 0.0;
        ctx.out.csv("spectrum_" + detuning_tag(picks[i]) + ".csv", ctx.header,
                    spectrum_table(spectra[i], cfg.output.spectrum_window, offset));
    }
}

// ---------------------------------------------------------------- fits

void run_fit_phonon(Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    std::vector<FringePoint> data;
    FilterSpec filter;
    Json source;
    if (!ctx.opt.data.empty()) {
        data = read_g1_data(ctx.opt.data.front());
        const ValidatedParams base = validate(cfg);
        const PhononTables tables(base.phonon, base.numerics);
        const ValidatedParams p = resolve_drive(cfg, tables);
        filter = make_filter(p.drive, p.cavity, tables.polaron_shift(), p.options);
        source = {{"kind", "file"}, {"path", ctx.opt.data.front().string()}};
    } else {
        const SyntheticFringe s = synthesize_fringe_data(cfg, ctx.opt.seed);
        data = s.data;
        filter = s.filter;
        source = {{"kind", "synthetic"},
                  {"seed", ctx.opt.seed},
                  {"alpha", cfg.phonon.alpha},
                  {"nu_c", cfg.phonon.nu_c},
                  {"relative_noise", cfg.fit.synth_noise}};
        CsvTable t{{"tau_ps", "v", "v_err"}, {}};
        for (const auto& d : data) t.rows.push_back({d.tau, d.v, d.err});
        ctx.out.csv("fringe_data.csv", ctx.header, t);
    }
    if (!cfg.options.filter_enabled) {
        // Without a cavity filter the model reduces to G(tau) / G(0); a very
        // wide filter reproduces that limit.
        filter.kappa = 0.5 / cfg.numerics.dtau;
        filter.center_offset = 0.0;
    }
    const double a0 = cfg.fit.alpha0.value_or(cfg.phonon.alpha);
    const double n0 = cfg.fit.nu_c0.value_or(cfg.phonon.nu_c);
    PhononFitOptions fo;
    fo.temperature = cfg.phonon.temperature;
    fo.epsilon = cfg.noise.epsilon;
    fo.tau_fit_max = cfg.fit.tau_fit_max;
    fo.max_iterations = cfg.fit.max_iterations;
    fo.dtau = cfg.numerics.dtau;
    ctx.log("fitting " + std::to_string(data.size()) + " points");
    const FitResult fit = fit_phonon_params(data, filter, {a0, n0}, fo);
    if (!fit.converged) std::cerr << "warning: phonon fit did not converge: " << fit.message << "\n";

    std::vector<double> taus;
    for (const auto& d : data) taus.push_back(d.tau);
    const auto model = g1_fit_model(taus, fit.get("alpha"), fit.get("nu_c"), fo.temperature, filter, fo.dtau);
    CsvTable overlay{{"tau_ps", "v_data", "v_err", "v_model"}, {}};
    for (std::size_t k = 0; k < data.size(); ++k) {
        overlay.rows.push_back({data[k].tau, data[k].v, data[k].err, (1.0 - fo.epsilon) * model[k]});
    }
    ctx.out.csv("fit_overlay.csv", ctx.header, overlay);
    Json doc;
    doc["source"] = source;
    doc["init"] = {{"alpha", a0}, {"nu_c", n0}};
    doc["points"] = data.size();
    doc["fit"] = fit_json(fit);
    ctx.out.json("fit.json", ctx.wrap(doc));
}

double spectrum_model(const FitResult& lo, double w, double gauss_fwhm) {
    return voigt(w, lo.get("zpl_center"), gauss_fwhm, lo.get("zpl_lorentz_fwhm"), lo.get("zpl_area")) +
           gaussian(w, lo.get("psb_center"), lo.get("psb_fwhm"), lo.get("psb_area"));
}

double high_res_model(const FitResult& hi, double w, double fsr) {
    const std::vector<int> images = fsr > 0.0 ? std::vector<int>{-1, 0, 1} : std::vector<int>{0};
    double m = 0.0;
    for (int n : images) {
        const double x = w - n * fsr;
        m += lorentzian(x, hi.get("inc_center"), hi.get("inc_fwhm"), hi.get("inc_area")) +
             gaussian(x, hi.get("cs_center"), hi.get("cs_fwhm"), hi.get("cs_area"));
    }
    return m;
}

void run_fit_spectra(Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    std::vector<SpectrumSample> lo, hi;
    AreaFitOptions ao;
    ao.high_res_fwhm = cfg.fit.high_res_fwhm;
    ao.fsr = cfg.fit.fsr;
    ao.max_iterations = cfg.fit.max_iterations;
    Json source;
    if (!ctx.opt.data.empty()) {
        if (ctx.opt.data.size() != 2) {
            throw ValidationError("data", "fit-spectra needs two files: low resolution, then high resolution");
        }
        lo = read_spectrum_data(ctx.opt.data[0]);
        hi = read_spectrum_data(ctx.opt.data[1]);
        ao.low_res_fwhm = cfg.fit.low_res_fwhm;
        source = {{"kind", "file"}, {"low_res", ctx.opt.data[0].string()}, {"high_res", ctx.opt.data[1].string()}};
    } else {
        const SyntheticSpectra s = synthesize_spectra(cfg, ctx.opt.seed);
        lo = s.low_res;
        hi = s.high_res;
        ao.low_res_fwhm = s.low_res_fwhm;
        source = {{"kind", "synthetic"},
                  {"seed", ctx.opt.seed},
                  {"low_res_fwhm_meV", angfreq_to_mev(s.low_res_fwhm)},
                  {"high_res_fwhm_meV", angfreq_to_mev(s.high_res_fwhm)},
                  {"truth", {{"f_cs", s.truth.f_cs}, {"f_inc", s.truth.f_inc}, {"f_psb", s.truth.f_psb}}}};
        for (auto [name, set] : {std::pair{"low_res_data.csv", &lo}, std::pair{"high_res_data.csv", &hi}}) {
            CsvTable t{{"energy_meV", "counts"}, {}};
            for (const auto& p : *set) t.rows.push_back({angfreq_to_mev(p.omega), p.counts});
            ctx.out.csv(name, ctx.header, t);
        }
    }
    const AreaFitResult r = area_fractions_from_spectra(lo, hi, ao);
    CsvTable tl{{"energy_meV", "counts", "model"}, {}};
    for (const auto& p : lo) tl.rows.push_back({angfreq_to_mev(p.omega), p.counts, spectrum_model(r.low_res, p.omega, ao.low_res_fwhm)});
    CsvTable th{{"energy_meV", "counts", "model"}, {}};
    for (const auto& p : hi) th.rows.push_back({angfreq_to_mev(p.omega), p.counts, high_res_model(r.high_res, p.omega, ao.fsr)});
    ctx.out.csv("low_res_overlay.csv", ctx.header, tl);
    ctx.out.csv("high_res_overlay.csv", ctx.header, th);
    Json doc;
    doc["source"] = source;
    doc["fractions"] = {{"f_cs", r.fractions.f_cs}, {"f_inc", r.fractions.f_inc}, {"f_psb", r.fractions.f_psb}};
    doc["low_res"] = fit_json(r.low_res);
    doc["high_res"] = fit_json(r.high_res);
    ctx.out.json("fit_spectra.json", ctx.wrap(doc));
}

} // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"g1-trace",       "spectrum",   "saturation-sweep",
                                                 "detuning-sweep", "fit-phonon", "fit-spectra"};
    return names;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (w <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < w; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

ValidatedParams resolve_drive(const RunConfig& cfg, const PhononTables& tables) {
    ValidatedParams p = validate(cfg);
    if (cfg.saturation) {
        if (!(*cfg.saturation >= 0.0)) throw ValidationError("drive.saturation", "must be non-negative");
        p.drive.omega = omega_for_saturation(*cfg.saturation, p, tables);
        p = validate_params(p);
    }
    return p;
}

double point_dephasing(const ValidatedParams& p, const PhononTables& tables) {
    if (!(p.noise.gamma_max > 0.0)) return 0.0;
    const double gamma_p = em_rates(tables, p.cavity, p.drive, p.options).gamma_p;
    return gamma_of_detuning(p.drive.delta_lx, p.noise, gamma_p);
}

std::vector<SaturationRow> saturation_sweep(const RunConfig& cfg, int workers) {
    const auto& ss = cfg.sweep.saturations;
    if (ss.empty()) throw ValidationError("sweep.saturations", "empty saturation list");
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    std::vector<SaturationRow> rows(ss.size());
    parallel_for(ss.size(), workers, [&](std::size_t i) {
        if (!(ss[i] > 0.0)) throw ValidationError("sweep.saturations", "values must be positive");
        RunConfig c = cfg;
        c.saturation = ss[i];
        const ValidatedParams p = resolve_drive(c, tables);
        PointRequest req;
        req.pure_dephasing = point_dephasing(p, tables);
        const PointResult r = evaluate_point(p, tables, req);
        const AtomicParams ap = atomic_counterpart(r);
        rows[i] = {ss[i], p.drive.omega, r.fractions.f_cs, r.fractions.f_inc, r.fractions.f_psb,
                   coherent_fraction_atomic(ap)};
    });
    return rows;
}

std::vector<double> detuning_grid(const SweepSpec& s) {
    if (!(s.detuning_step > 0.0)) throw ValidationError("sweep.detuning_step", "must be positive");
    if (!(s.detuning_max > s.detuning_min)) throw ValidationError("sweep.detuning_max", "must exceed detuning_min");
    const auto n = static_cast<std::size_t>(std::floor((s.detuning_max - s.detuning_min) / s.detuning_step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s.detuning_min + s.detuning_step * static_cast<double>(i);
    return out;
}

DetuningSweep detuning_sweep(const RunConfig& cfg, int workers) {
    const std::vector<double> deltas = detuning_grid(cfg.sweep);
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    DetuningSweep out;
    // Delta_xc is held fixed, so the Purcell rate is the same at every point.
    out.gamma_p = em_rates(tables, base.cavity, base.drive, base.options).gamma_p;
    out.xi = base.noise.xi.value_or(out.gamma_p);
    const bool dephase = cfg.sweep.dephasing && base.noise.gamma_max > 0.0;

    out.rows.resize(deltas.size());
    parallel_for(deltas.size(), workers, [&](std::size_t i) {
        RunConfig c = cfg;
        c.drive.delta_lx = deltas[i];
        const ValidatedParams p = resolve_drive(c, tables);
        const PointResult raw = evaluate_point(p, tables, {});
        DetuningRow row;
        row.delta = deltas[i];
        row.f_cs_raw = raw.fractions.f_cs;
        EmissionFractions f = raw.fractions;
        if (dephase) {
            PointRequest req;
            req.pure_dephasing = gamma_of_detuning(deltas[i], p.noise, out.gamma_p);
            f = evaluate_point(p, tables, req).fractions;
        }
        row.f_cs_dephased = f.f_cs;
        row.p_tot = f.p_tot;
        row.p_coh = f.p_coh;
        row.f_cs_wandered = f.f_cs;
        out.rows[i] = row;
    });

    if (cfg.sweep.wandering && base.noise.wandering_fwhm > 0.0) {
        PowerCurves pc;
        for (const auto& r : out.rows) {
            pc.deltas.push_back(r.delta);
            pc.p_tot.push_back(r.p_tot);
            pc.p_coh.push_back(r.p_coh);
        }
        const auto fw = wandering_fraction(pc, base.noise.wandering_fwhm);
        for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].f_cs_wandered = fw[i];
    }
    return out;
}

SyntheticFringe synthesize_fringe_data(const RunConfig& cfg, std::uint64_t seed) {
    if (!(cfg.fit.sample_dtau > 0.0)) throw ValidationError("fit.sample_dtau", "must be positive");
    if (!(cfg.fit.synth_noise >= 0.0)) throw ValidationError("fit.synth_noise", "must be non-negative");
    RunConfig c = cfg;
    c.numerics.dtau = cfg.fit.sample_dtau;
    const ValidatedParams base = validate(c);
    const PhononTables tables(base.phonon, base.numerics);
    const ValidatedParams p = resolve_drive(c, tables);

    const Liouvillian l = build_liouvillian(tables, p.drive, p.cavity, point_dephasing(p, tables), p.options,
                                            p.numerics.ss_tol);
    const DensityMatrix2 rho = l.steady_state();
    if (!(rho.rxx().real() > 0.0)) throw NumericalError("no emission: the emitter is not driven");
    const CorrelationTrace g_pol = polaron_g1(g1_opt(l, rho, p.numerics.dtau, trace_length(p.numerics)), tables);

    SyntheticFringe out;
    out.filter = make_filter(p.drive, p.cavity, tables.polaron_shift(), p.options);
    CorrelationTrace g = p.options.filter_enabled ? detect_g1(g_pol, out.filter) : g_pol;
    if (p.noise.instrument_dtau > 0.0 || p.noise.laser_mu > 0.0) g = apply_instrument_response(g, p.noise);
    const std::vector<double> v = fringe_contrast(g, p.noise.epsilon);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double rel = cfg.fit.synth_noise;
    for (std::size_t k = 0; k < g.size() && g.tau(k) <= cfg.fit.tau_fit_max + 1e-9; ++k) {
        const double noise = rel > 0.0 ? rel * v[k] * normal(rng) : 0.0;
        out.data.push_back({g.tau(k), v[k] + noise, rel * v[k]});
        out.clean.push_back(v[k]);
    }
    return out;
}

SyntheticSpectra synthesize_spectra(const RunConfig& cfg, std::uint64_t seed) {
    if (!(cfg.fit.synth_noise >= 0.0)) throw ValidationError("fit.synth_noise", "must be non-negative");
    const ValidatedParams base = validate(cfg);
    const PhononTables tables(base.phonon, base.numerics);
    const ValidatedParams p = resolve_drive(cfg, tables);
    PointRequest req;
    req.pure_dephasing = point_dephasing(p, tables);
    req.keep_spectrum = true;
    const PointResult r = evaluate_point(p, tables, req);
    if (!r.spectrum) throw NumericalError("no emission: the emitter is not driven");
    const SpectrumResult& s = *r.spectrum;

    SyntheticSpectra out;
    out.truth = r.fractions;
    out.low_res_fwhm = cfg.fit.low_res_fwhm > 0.0 ? cfg.fit.low_res_fwhm : uev_to_angfreq(30.0);
    out.high_res_fwhm = cfg.fit.high_res_fwhm > 0.0 ? cfg.fit.high_res_fwhm : uev_to_angfreq(2.0);

    // Emitted power densities (per unit angular frequency) on the FFT grid.
    const double dw = s.grid.domega;
    const std::size_t m = s.omegas.size();
    std::vector<double> inc(m), all(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = filter_response(s.omegas[i], s.filter);
        inc[i] = h * s.s_opt[i] / (2.0 * constants::pi);
        all[i] = h * (s.s_opt[i] + s.s_sb[i]) / (2.0 * constants::pi);
    }
    const double p_coh = r.fractions.p_coh;

    auto blur = [&](const std::vector<double>& density, double w, double fwhm) {
        const double sigma = fwhm_to_sigma(fwhm);
        const double reach = 5.0 * sigma + dw;
        const auto lo = static_cast<long>(std::ceil((w - reach - s.omegas.front()) / dw));
        const auto hi = static_cast<long>(std::floor((w + reach - s.omegas.front()) / dw));
        double acc = 0.0;
        for (long i = std::max(0L, lo); i <= std::min(static_cast<long>(m) - 1, hi); ++i) {
            // each FFT bin is spread as a flat block, so widths below dw stay exact
            const double c = s.omegas[static_cast<std::size_t>(i)] - w;
            const double weight = 0.5 * (std::erf((c + 0.5 * dw) / (std::sqrt(2.0) * sigma)) -
                                         std::erf((c - 0.5 * dw) / (std::sqrt(2.0) * sigma)));
            acc += density[static_cast<std::size_t>(i)] * weight;
        }
        return acc + p_coh * gaussian(w, 0.0, fwhm, 1.0);
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto add_noise = [&](std::vector<SpectrumSample>& v) {
        double peak = 0.0;
        for (const auto& x : v) peak = std::max(peak, x.counts);
        for (auto& x : v) x.counts += cfg.fit.synth_noise * std::sqrt(std::max(x.counts, 0.0) * peak) * normal(rng);
    };

    const double window = cfg.output.spectrum_window;
    const double step_lo = out.low_res_fwhm / 8.0;
    const auto n_lo = static_cast<long>(std::floor(window / step_lo));
    for (long k = -n_lo; k <= n_lo; ++k) {
        const double w = step_lo * static_cast<double>(k);
        out.low_res.push_back({w, blur(all, w, out.low_res_fwhm)});
    }
    add_noise(out.low_res);

    const double half = std::min(window, std::max(0.5, 40.0 * out.high_res_fwhm));
    const double step_hi = out.high_res_fwhm / 4.0;
    const auto n_hi = static_cast<long>(std::floor(half / step_hi));
    const double fsr = cfg.fit.fsr;
    for (long k = -n_hi; k <= n_hi; ++k) {
        const double w = step_hi * static_cast<double>(k);
        double c = blur(inc, w, out.high_res_fwhm);
        if (fsr > 0.0) c += blur(inc, w - fsr, out.high_res_fwhm) + blur(inc, w + fsr, out.high_res_fwhm);
        out.high_res.push_back({w, c});
    }
    add_noise(out.high_res);
    return out;
}

std::vector<std::filesystem::path> run_scenario(const std::string& name, const RunConfig& cfg,
                                                const ScenarioOptions& opt) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw ValidationError("scenario", "unknown scenario '" + name + "'");
    }
    if (opt.workers < 1) throw ValidationError("workers", "must be at least 1");
    if (cfg.output.stride < 1) throw ValidationError("output.stride", "must be at least 1");

    Context ctx(cfg, opt, name);
    if (name == "g1-trace") run_g1_trace(ctx);
    else if (name == "spectrum") run_spectrum(ctx);
    else if (name == "saturation-sweep") run_saturation_sweep(ctx);
    else if (name == "detuning-sweep") run_detuning_sweep(ctx);
    else if (name == "fit-phonon") run_fit_phonon(ctx);
    else run_fit_spectra(ctx);

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw ValidationError("out", "cannot create '" + opt.out_dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    for (const auto& [file, content] : ctx.out.files) {
        const auto path = opt.out_dir / file;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ValidationError("out", "cannot write '" + path.string() + "'");
        f << content;
        written.push_back(path);
        ctx.log("wrote " + path.string());
    }
    return written;
}

} // namespace qds
