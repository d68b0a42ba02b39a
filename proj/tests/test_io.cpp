#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dms/errors.hpp"
#include "dms/io.hpp"
#include "dms/steady_state.hpp"

using namespace dms;

TEST_CASE("17-digit formatting round-trips doubles exactly") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const double x = static_cast<double>(gen()) / static_cast<double>(UINT64_MAX);
        CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
    }
    CHECK(io::format_double(2.0 / 3.0) == "0.66666666666666663");
}

TEST_CASE("distribution CSV round trip, including tail and counts") {
    DegreeDistribution d = steady_recurrence(ModelParams(2, 1.0), 40);
    std::map<std::int64_t, std::int64_t> counts;
    for (const auto& [q, p] : d.entries) counts[q] = q * 3 + 1;

    std::stringstream ss;
    io::write_distribution_csv(ss, d, &counts);

    std::map<std::int64_t, double> counts_back;
    const DegreeDistribution back = io::read_distribution_csv(ss, &counts_back);
    CHECK(back.entries == d.entries);  // bit-exact via 17 significant digits
    CHECK(back.tail_mass == d.tail_mass);
    for (const auto& [q, c] : counts) CHECK(counts_back[q] == static_cast<double>(c));
}

TEST_CASE("CSV reader accepts any column order") {
    std::stringstream ss("p,q\n0.5,0\n0.5,2\n");
    const DegreeDistribution d = io::read_distribution_csv(ss);
    CHECK(d.mass(0) == 0.5);
    CHECK(d.mass(2) == 0.5);
}

TEST_CASE("CSV schema violations name row and column") {
    {
        std::stringstream ss("q,wat\n");
        CHECK_THROWS_WITH_AS(io::read_distribution_csv(ss), doctest::Contains("wat"), schema_error);
    }
    {
        std::stringstream ss("q,p\n1\n");
        try {
            io::read_distribution_csv(ss);
            FAIL("expected schema_error");
        } catch (const schema_error& e) {
            CHECK(e.row == 2);
        }
    }
    {
        std::stringstream ss("q,p\nx,0.5\n");
        try {
            io::read_distribution_csv(ss);
            FAIL("expected schema_error");
        } catch (const schema_error& e) {
            CHECK(e.column == "q");
            CHECK(e.row == 2);
        }
    }
    {
        std::stringstream ss("q,p\n3,0.5\n3,0.5\n");
        CHECK_THROWS_WITH_AS(io::read_distribution_csv(ss), doctest::Contains("duplicate"),
                             schema_error);
    }
    {
        std::stringstream ss("");
        CHECK_THROWS_AS(io::read_distribution_csv(ss), schema_error);
    }
}

TEST_CASE("distribution JSON carries params, entries and tail") {
    const ModelParams p(2, 1.0);
    const DegreeDistribution d = steady_recurrence(p, 5);
    const nlohmann::json j = nlohmann::json::parse(io::distribution_json(d, &p));
    CHECK(j["params"]["m"] == 2);
    CHECK(j["params"]["A"] == 1.0);
    CHECK(j["params"]["a"] == 0.5);
    CHECK(j["entries"].size() == 6);
    CHECK(j["entries"][0][0] == 0);
    CHECK(j["entries"][0][1].get<double>() == d.mass(0));
    CHECK(j["tail_mass"].get<double>() == d.tail_mass);
}

TEST_CASE("comparison report JSON shape") {
    ComparisonReport rep;
    rep.left_label = "sim";
    rep.right_label = "closed";
    rep.tv = 0.01;
    rep.chi2 = {4.2, 3, 4};
    rep.ks = 0.005;
    rep.q_min = 0;
    rep.q_max = 200;
    const nlohmann::json j = nlohmann::json::parse(io::comparison_report_json(rep));
    CHECK(j["tv"] == 0.01);
    CHECK(j["chi_square"]["dof"] == 3);
    CHECK(j["q_range"][1] == 200);
}

TEST_CASE("manifest writes atomically next to the output") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "dms_io_test";
    std::filesystem::create_directories(dir);
    const std::filesystem::path out = dir / "d.csv";

    io::RunManifest m;
    m.command = "steady";
    m.argv = {"steady", "--m", "1"};
    m.started_at = io::iso8601_now();
    m.finished_at = io::iso8601_now();
    m.outputs = {out.string()};
    m.extra_json = R"({"q_max": 3})";

    const std::filesystem::path mpath = io::manifest_path(out);
    io::write_manifest(mpath, m);
    CHECK(std::filesystem::exists(mpath));
    CHECK_FALSE(std::filesystem::exists(mpath.string() + ".tmp"));

    std::ifstream is(mpath);
    nlohmann::json j;
    is >> j;
    CHECK(j["command"] == "steady");
    CHECK(j["extra"]["q_max"] == 3);
    CHECK(j["version"] == io::kToolVersion);
    std::filesystem::remove_all(dir);
}

TEST_CASE("auxiliary CSV payloads") {
    ConvergenceSeries series;
    series.q = 0;
    series.points = {{10, 0.5, -0.1}, {100, 0.6, -0.01}};
    std::stringstream ss;
    io::write_convergence_csv(ss, series);
    CHECK(ss.str().substr(0, 14) == "t,p,t_delta_p\n");

    FirstPassageTable table;
    table.rows[{1, 3}] = 0.25;
    table.rows[{1, 4}] = 0.125;
    std::stringstream fs;
    io::write_first_passage_csv(fs, table, 1);
    CHECK(fs.str() == "s,f\n3,0.25\n4,0.125\n");

    std::stringstream es;
    io::write_edges_csv(es, {{2, 1}, {3, 1}});
    CHECK(es.str() == "step,target\n2,1\n3,1\n");
}
