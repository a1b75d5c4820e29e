#include "qds/io.hpp"

#include "qds/units.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qds {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    return out;
}

bool parse_double(const std::string& s, double& x) {
    if (s.empty()) return false;
    try {
        std::size_t used = 0;
        x = std::stod(s, &used);
        return used == s.size() && std::isfinite(x);
    } catch (const std::exception&) {
        return false;
    }
}

// Numeric rows of a CSV file, at least `min_cols` wide.
std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path, std::size_t min_cols) {
    std::ifstream in(path);
    if (!in) throw ValidationError("data", "cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split_fields(t);
        std::vector<double> row;
        bool ok = fields.size() >= min_cols;
        for (const auto& f : fields) {
            double x = 0.0;
            if (!parse_double(f, x)) {
                ok = false;
                break;
            }
            row.push_back(x);
        }
        if (!ok) {
            if (rows.empty() && !header_seen) {
                header_seen = true;
                continue;
            }
            throw ValidationError("data", path.string() + ":" + std::to_string(lineno) + ": expected " +
                                              std::to_string(min_cols) + " numeric columns");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("data", path.string() + ": no data rows");
    return rows;
}

} // namespace

const char* version() { return QDS_VERSION; }

std::vector<std::string> metadata_lines(const RunConfig& cfg, const std::string& scenario) {
    std::vector<std::string> out;
    out.push_back(std::string("qdscatter ") + version());
    out.push_back("scenario = " + scenario);
    for (const auto& [k, v] : resolved_entries(cfg)) out.push_back(k + " = " + v);
    return out;
}

std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string render_csv(const std::vector<std::string>& header, const CsvTable& table) {
    std::string out;
    for (const auto& h : header) out += "# " + h + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const CsvTable& table) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("output", "cannot write " + path.string());
    f << render_csv(header, table);
}

nlohmann::ordered_json with_metadata(const RunConfig& cfg, const std::string& scenario,
                                     const nlohmann::ordered_json& payload) {
    nlohmann::ordered_json doc;
    doc["metadata"]["version"] = version();
    doc["metadata"]["scenario"] = scenario;
    for (const auto& [k, v] : resolved_entries(cfg)) doc["metadata"]["config"][k] = v;
    for (const auto& [k, v] : payload.items()) doc[k] = v;
    return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("output", "cannot write " + path.string());
    f << doc.dump(2) << '\n';
}

std::vector<FringePoint> read_g1_data(const std::filesystem::path& path) {
    std::vector<FringePoint> out;
    for (const auto& r : read_numeric(path, 2)) out.push_back({r[0], r[1], r.size() > 2 ? r[2] : 0.0});
    return out;
}

std::vector<SpectrumSample> read_spectrum_data(const std::filesystem::path& path) {
    std::vector<SpectrumSample> out;
    for (const auto& r : read_numeric(path, 2)) out.push_back({mev_to_angfreq(r[0]), r[1]});
    return out;
}

} // namespace qds
