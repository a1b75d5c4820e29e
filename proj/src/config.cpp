#include "qds/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qds {

namespace {

enum class Dim { Frequency, Time, Temperature, Alpha, Plain, Count };

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits "2.51 meV" into (2.51, "mev").
std::pair<double, std::string> split_number(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) {
        throw ValidationError(key, "expected a number, got '" + text + "'");
    }
    return {value, lower(trim(std::string(ptr, end)))};
}

double convert(const std::string& key, const std::string& raw, Dim dim) {
    auto [value, unit] = split_number(key, raw);
    auto bad_unit = [&]() -> double {
        throw ValidationError(key, "unsupported unit '" + unit + "'");
    };
    switch (dim) {
    case Dim::Frequency:
        if (unit.empty() || unit == "ps^-1" || unit == "1/ps" || unit == "rad/ps") return value;
        if (unit == "mev") return mev_to_angfreq(value);
        if (unit == "uev" || unit == "\xc2\xb5" "ev" || unit == "\xce\xbc" "ev") return uev_to_angfreq(value);
        return bad_unit();
    case Dim::Time:
        if (unit.empty() || unit == "ps") return value;
        if (unit == "ns") return 1e3 * value;
        if (unit == "fs") return 1e-3 * value;
        return bad_unit();
    case Dim::Temperature:
        if (unit.empty() || unit == "k") return value;
        return bad_unit();
    case Dim::Alpha:
        if (unit.empty() || unit == "ps^2" || unit == "ps2") return value;
        return bad_unit();
    case Dim::Plain:
    case Dim::Count:
        if (unit.empty()) return value;
        return bad_unit();
    default:
        return bad_unit();
    }
}

bool parse_flag(const std::string& key, const std::string& raw) {
    const std::string v = lower(trim(raw));
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ValidationError(key, "expected a boolean, got '" + raw + "'");
}

int parse_count(const std::string& key, const std::string& raw) {
    const double v = convert(key, raw, Dim::Count);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ValidationError(key, "expected an integer");
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& raw, Dim dim) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(convert(key, item, dim));
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += fmt(xs[i]);
    }
    return s;
}

struct Key {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

using Table = std::map<std::string, Key>;  // "section.key"

template <class Getter>
Key number(Getter field, Dim dim, std::string name) {
    return {[field, dim, name](RunConfig& c, const std::string& v) { field(c) = convert(name, v, dim); },
            [field](const RunConfig& c) { return fmt(field(const_cast<RunConfig&>(c))); }};
}

const Table& table() {
    static const Table t = [] {
        Table t;
        t["phonon.alpha"] = number([](RunConfig& c) -> double& { return c.phonon.alpha; }, Dim::Alpha, "alpha");
        t["phonon.nu_c"] = number([](RunConfig& c) -> double& { return c.phonon.nu_c; }, Dim::Frequency, "nu_c");
        t["phonon.temperature"] =
            number([](RunConfig& c) -> double& { return c.phonon.temperature; }, Dim::Temperature, "temperature");

        t["drive.omega"] = number([](RunConfig& c) -> double& { return c.drive.omega; }, Dim::Frequency, "omega");
        t["drive.delta_lx"] =
            number([](RunConfig& c) -> double& { return c.drive.delta_lx; }, Dim::Frequency, "delta_lx");
        t["drive.saturation"] = {
            [](RunConfig& c, const std::string& v) {
                const std::string s = lower(trim(v));
                if (s == "none" || s.empty()) c.saturation.reset();
                else c.saturation = convert("saturation", v, Dim::Plain);
            },
            [](const RunConfig& c) { return c.saturation ? fmt(*c.saturation) : std::string("none"); }};

        t["cavity.g"] = number([](RunConfig& c) -> double& { return c.cavity.g; }, Dim::Frequency, "g");
        t["cavity.kappa"] = number([](RunConfig& c) -> double& { return c.cavity.kappa; }, Dim::Frequency, "kappa");
        t["cavity.delta_xc"] =
            number([](RunConfig& c) -> double& { return c.cavity.delta_xc; }, Dim::Frequency, "delta_xc");

        t["noise.gamma_max"] =
            number([](RunConfig& c) -> double& { return c.noise.gamma_max; }, Dim::Frequency, "gamma_max");
        t["noise.xi"] = {
            [](RunConfig& c, const std::string& v) {
                const std::string s = lower(trim(v));
                if (s == "auto" || s.empty()) c.noise.xi.reset();
                else c.noise.xi = convert("xi", v, Dim::Frequency);
            },
            [](const RunConfig& c) { return c.noise.xi ? fmt(*c.noise.xi) : std::string("auto"); }};
        t["noise.wandering_fwhm"] =
            number([](RunConfig& c) -> double& { return c.noise.wandering_fwhm; }, Dim::Frequency, "wandering_fwhm");
        t["noise.epsilon"] = number([](RunConfig& c) -> double& { return c.noise.epsilon; }, Dim::Plain, "epsilon");
        t["noise.laser_mu"] =
            number([](RunConfig& c) -> double& { return c.noise.laser_mu; }, Dim::Frequency, "laser_mu");
        t["noise.instrument_dtau"] =
            number([](RunConfig& c) -> double& { return c.noise.instrument_dtau; }, Dim::Time, "instrument_dtau");

        t["numerics.nu_max_factor"] =
            number([](RunConfig& c) -> double& { return c.numerics.nu_max_factor; }, Dim::Plain, "nu_max_factor");
        t["numerics.quad_points"] = {
            [](RunConfig& c, const std::string& v) { c.numerics.quad_points = parse_count("quad_points", v); },
            [](const RunConfig& c) { return std::to_string(c.numerics.quad_points); }};
        t["numerics.tau_max"] = number([](RunConfig& c) -> double& { return c.numerics.tau_max; }, Dim::Time, "tau_max");
        t["numerics.dtau"] = number([](RunConfig& c) -> double& { return c.numerics.dtau; }, Dim::Time, "dtau");
        t["numerics.fft_size"] = {
            [](RunConfig& c, const std::string& v) { c.numerics.fft_size = parse_count("fft_size", v); },
            [](const RunConfig& c) { return std::to_string(c.numerics.fft_size); }};
        t["numerics.ss_tol"] = number([](RunConfig& c) -> double& { return c.numerics.ss_tol; }, Dim::Plain, "ss_tol");

        t["model.coherent_rabi"] = {
            [](RunConfig& c, const std::string& v) {
                const std::string s = lower(trim(v));
                if (s == "renormalized") c.options.coherent_rabi = CoherentRabi::Renormalized;
                else if (s == "bare") c.options.coherent_rabi = CoherentRabi::Bare;
                else throw ValidationError("coherent_rabi", "expected 'renormalized' or 'bare'");
            },
            [](const RunConfig& c) {
                return std::string(c.options.coherent_rabi == CoherentRabi::Bare ? "bare" : "renormalized");
            }};
        t["model.detuning_reference"] = {
            [](RunConfig& c, const std::string& v) {
                const std::string s = lower(trim(v));
                if (s == "shifted") c.options.detuning_reference = DetuningReference::PolaronShifted;
                else if (s == "bare") c.options.detuning_reference = DetuningReference::Bare;
                else throw ValidationError("detuning_reference", "expected 'shifted' or 'bare'");
            },
            [](const RunConfig& c) {
                return std::string(c.options.detuning_reference == DetuningReference::Bare ? "bare" : "shifted");
            }};
        t["model.filter_center"] = {
            [](RunConfig& c, const std::string& v) {
                const std::string s = lower(trim(v));
                if (s == "cavity") c.options.filter_center = FilterCenter::CavityAbsolute;
                else if (s == "exciton") c.options.filter_center = FilterCenter::ExcitonRelative;
                else throw ValidationError("filter_center", "expected 'cavity' or 'exciton'");
            },
            [](const RunConfig& c) {
                return std::string(c.options.filter_center == FilterCenter::ExcitonRelative ? "exciton" : "cavity");
            }};
        t["model.filter"] = {
            [](RunConfig& c, const std::string& v) { c.options.filter_enabled = parse_flag("filter", v); },
            [](const RunConfig& c) { return std::string(c.options.filter_enabled ? "true" : "false"); }};

        t["sweep.saturations"] = {
            [](RunConfig& c, const std::string& v) { c.sweep.saturations = parse_list("saturations", v, Dim::Plain); },
            [](const RunConfig& c) { return fmt_list(c.sweep.saturations); }};
        t["sweep.detuning_min"] =
            number([](RunConfig& c) -> double& { return c.sweep.detuning_min; }, Dim::Frequency, "detuning_min");
        t["sweep.detuning_max"] =
            number([](RunConfig& c) -> double& { return c.sweep.detuning_max; }, Dim::Frequency, "detuning_max");
        t["sweep.detuning_step"] =
            number([](RunConfig& c) -> double& { return c.sweep.detuning_step; }, Dim::Frequency, "detuning_step");
        t["sweep.spectrum_detunings"] = {
            [](RunConfig& c, const std::string& v) {
                c.sweep.spectrum_detunings = parse_list("spectrum_detunings", v, Dim::Frequency);
            },
            [](const RunConfig& c) { return fmt_list(c.sweep.spectrum_detunings); }};
        t["sweep.dephasing"] = {
            [](RunConfig& c, const std::string& v) { c.sweep.dephasing = parse_flag("dephasing", v); },
            [](const RunConfig& c) { return std::string(c.sweep.dephasing ? "true" : "false"); }};
        t["sweep.wandering"] = {
            [](RunConfig& c, const std::string& v) { c.sweep.wandering = parse_flag("wandering", v); },
            [](const RunConfig& c) { return std::string(c.sweep.wandering ? "true" : "false"); }};

        t["fit.t_phonon"] = number([](RunConfig& c) -> double& { return c.fit.t_phonon; }, Dim::Time, "t_phonon");
        t["fit.t_rad"] = number([](RunConfig& c) -> double& { return c.fit.t_rad; }, Dim::Time, "t_rad");
        t["fit.tau_fit_max"] =
            number([](RunConfig& c) -> double& { return c.fit.tau_fit_max; }, Dim::Time, "tau_fit_max");
        t["fit.synth_noise"] =
            number([](RunConfig& c) -> double& { return c.fit.synth_noise; }, Dim::Plain, "synth_noise");
        t["fit.sample_dtau"] =
            number([](RunConfig& c) -> double& { return c.fit.sample_dtau; }, Dim::Time, "sample_dtau");
        t["fit.alpha0"] = {
            [](RunConfig& c, const std::string& v) { c.fit.alpha0 = convert("alpha0", v, Dim::Alpha); },
            [](const RunConfig& c) { return c.fit.alpha0 ? fmt(*c.fit.alpha0) : std::string("auto"); }};
        t["fit.nu_c0"] = {
            [](RunConfig& c, const std::string& v) { c.fit.nu_c0 = convert("nu_c0", v, Dim::Frequency); },
            [](const RunConfig& c) { return c.fit.nu_c0 ? fmt(*c.fit.nu_c0) : std::string("auto"); }};
        t["fit.max_iterations"] = {
            [](RunConfig& c, const std::string& v) { c.fit.max_iterations = parse_count("max_iterations", v); },
            [](const RunConfig& c) { return std::to_string(c.fit.max_iterations); }};
        t["fit.low_res_fwhm"] =
            number([](RunConfig& c) -> double& { return c.fit.low_res_fwhm; }, Dim::Frequency, "low_res_fwhm");
        t["fit.high_res_fwhm"] =
            number([](RunConfig& c) -> double& { return c.fit.high_res_fwhm; }, Dim::Frequency, "high_res_fwhm");
        t["fit.fsr"] = number([](RunConfig& c) -> double& { return c.fit.fsr; }, Dim::Frequency, "fsr");

        t["output.stride"] = {
            [](RunConfig& c, const std::string& v) { c.output.stride = parse_count("stride", v); },
            [](const RunConfig& c) { return std::to_string(c.output.stride); }};
        t["output.spectrum_window"] =
            number([](RunConfig& c) -> double& { return c.output.spectrum_window; }, Dim::Frequency, "spectrum_window");
        t["output.center_on_exciton"] = {
            [](RunConfig& c, const std::string& v) { c.output.center_on_exciton = parse_flag("center_on_exciton", v); },
            [](const RunConfig& c) { return std::string(c.output.center_on_exciton ? "true" : "false"); }};
        return t;
    }();
    return t;
}

void assign(RunConfig& cfg, const std::string& full_key, const std::string& value) {
    const auto it = table().find(full_key);
    if (it == table().end()) throw ValidationError(full_key, "unknown configuration key");
    it->second.set(cfg, value);
}

} // namespace

double parse_frequency(const std::string& text) { return convert("frequency", text, Dim::Frequency); }

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError("config", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ValidationError(section, "key outside of any section");
        for (const auto& [key, node] : body) {
            assign(cfg, section + "." + key, node.data());
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ValidationError(assignment, "override must look like key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = assignment.substr(eq + 1);
    if (key.find('.') != std::string::npos) {
        assign(cfg, key, value);
        return;
    }
    std::vector<std::string> matches;
    for (const auto& [full, _] : table()) {
        if (full.substr(full.find('.') + 1) == key) matches.push_back(full);
    }
    if (matches.empty()) throw ValidationError(key, "unknown configuration key");
    if (matches.size() > 1) throw ValidationError(key, "ambiguous key; qualify it with a section");
    assign(cfg, matches.front(), value);
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, entry] : table()) out.emplace_back(key, entry.get(cfg));
    return out;
}

ValidatedParams validate(const RunConfig& cfg) {
    return validate_params(cfg.phonon, cfg.drive, cfg.cavity, cfg.noise, cfg.numerics, cfg.options);
}

} // namespace qds
