// io.hpp - CSV / JSON output with a metadata header, and the two data readers.

#pragma once

#include "qds/config.hpp"
#include "qds/fitting.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qds {

const char* version();

// "# key = value" lines: artifact version, scenario and the resolved configuration.
std::vector<std::string> metadata_lines(const RunConfig& cfg, const std::string& scenario);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Numbers are written with "%.12g" so reruns are byte-identical.
std::string format_number(double x);
std::string render_csv(const std::vector<std::string>& header, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const CsvTable& table);

// Adds a "metadata" object (version, scenario, configuration) ahead of the payload.
nlohmann::ordered_json with_metadata(const RunConfig& cfg, const std::string& scenario,
                                     const nlohmann::ordered_json& payload);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

// Columns tau_ps, v[, v_err]. '#' lines and one leading header row are skipped.
std::vector<FringePoint> read_g1_data(const std::filesystem::path& path);

// Columns energy_meV, counts; energies are returned in ps^-1.
std::vector<SpectrumSample> read_spectrum_data(const std::filesystem::path& path);

} // namespace qds
