#include "qds/config.hpp"
#include "qds/io.hpp"
#include "qds/units.hpp"

#include "approx.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace qds;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "qds_test_io";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1.25e-20) == "1.25e-20");
    CHECK(std::stod(format_number(0.1 + 0.2)) == approx(0.3).epsilon(1e-12));
}

TEST_CASE("csv rendering") {
    CsvTable t;
    t.columns = {"a", "b"};
    t.rows = {{1.0, 2.5}, {-0.0, 1e-3}};
    CHECK(render_csv({"x = 1", "y = two"}, t) == "# x = 1\n# y = two\na,b\n1,2.5\n0,0.001\n");
    CHECK(render_csv({}, t).rfind("a,b\n", 0) == 0);
}

TEST_CASE("metadata carries the version, scenario and every resolved key") {
    RunConfig cfg;
    cfg.phonon.alpha = 0.25;
    const auto lines = metadata_lines(cfg, "spectrum");
    REQUIRE(lines.size() == resolved_entries(cfg).size() + 2);
    CHECK(lines[0] == std::string("qdscatter ") + version());
    CHECK(lines[1] == "scenario = spectrum");
    CHECK(std::find(lines.begin(), lines.end(), "phonon.alpha = 0.25") != lines.end());

    const auto doc = with_metadata(cfg, "fit-phonon", {{"alpha", 1.0}, {"nu_c", 2.0}});
    CHECK(doc.begin().key() == "metadata");
    CHECK(doc["metadata"]["scenario"] == "fit-phonon");
    CHECK(doc["metadata"]["version"] == version());
    CHECK(doc["metadata"]["config"]["phonon.alpha"] == "0.25");
    CHECK(doc["alpha"] == 1.0);
    CHECK(doc["nu_c"] == 2.0);
}

TEST_CASE("written files round trip") {
    CsvTable t;
    t.columns = {"tau_ps", "v"};
    t.rows = {{0.0, 1.0}, {0.5, 0.75}};
    const fs::path p = fs::temp_directory_path() / "qds_test_io" / "out.csv";
    fs::create_directories(p.parent_path());
    write_csv(p, {"h"}, t);
    std::ifstream in(p, std::ios::binary);
    const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == render_csv({"h"}, t));

    const auto g = read_g1_data(p);
    REQUIRE(g.size() == 2);
    CHECK(g[1].tau == 0.5);
    CHECK(g[1].v == 0.75);
    CHECK(g[1].err == 0.0);

    CHECK_THROWS_AS(write_csv("/nonexistent-dir/x.csv", {}, t), ValidationError);
}

TEST_CASE("fringe data reader") {
    const auto p = scratch("g1.csv", "# comment\n\ntau_ps, v, v_err\n0, 0.98, 0.01\n1.5,0.9,0.02\n  3 , 0.85 , 0.01 \n");
    const auto d = read_g1_data(p);
    REQUIRE(d.size() == 3);
    CHECK(d[0].tau == 0.0);
    CHECK(d[0].err == 0.01);
    CHECK(d[2].tau == 3.0);
    CHECK(d[2].v == 0.85);

    const auto two = read_g1_data(scratch("g1b.csv", "1,0.5\n2,0.4\n"));
    REQUIRE(two.size() == 2);
    CHECK(two[0].err == 0.0);
}

TEST_CASE("spectrum reader converts meV to ps^-1") {
    const auto p = scratch("spectrum.csv", "energy_meV,counts\n-0.5,10\n0,100\n0.25,20\n");
    const auto s = read_spectrum_data(p);
    REQUIRE(s.size() == 3);
    CHECK(s[0].omega == approx(mev_to_angfreq(-0.5)).epsilon(1e-14));
    CHECK(s[2].omega == approx(0.25 / 0.6582119569).epsilon(1e-9));
    CHECK(s[1].counts == 100.0);
}

TEST_CASE("reader errors name the file and line") {
    const auto bad = scratch("bad.csv", "tau,v\n0,1\n1,oops\n");
    const std::string msg = error_of([&] { read_g1_data(bad); });
    CHECK(msg.find(bad.string() + ":3") != std::string::npos);

    const auto narrow = scratch("narrow.csv", "0,1\n1\n");
    CHECK(error_of([&] { read_g1_data(narrow); }).find(":2") != std::string::npos);

    const auto empty = scratch("empty.csv", "# nothing\n\n");
    CHECK(error_of([&] { read_spectrum_data(empty); }).find("no data rows") != std::string::npos);

    const auto header_only = scratch("hdr.csv", "energy_meV,counts\n");
    CHECK(error_of([&] { read_spectrum_data(header_only); }).find("no data rows") != std::string::npos);

    CHECK(error_of([&] { read_g1_data("/nonexistent/file.csv"); }).find("cannot open") != std::string::npos);

    const auto two_headers = scratch("twohdr.csv", "a,b\nc,d\n0,1\n");
    CHECK(error_of([&] { read_g1_data(two_headers); }).find(":2") != std::string::npos);

    const auto nan = scratch("nan.csv", "0,nan\n");
    CHECK_THROWS_AS(read_g1_data(nan), ValidationError);
}
