#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "magnon/experiments/config.hpp"
#include "magnon/experiments/csv.hpp"
#include "magnon/experiments/runner.hpp"
#include "magnon/experiments/worker_pool.hpp"

using namespace magnon;
using namespace magnon::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("magnon_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config() {
    RunConfig c;
    c.chain.n_sites = 61;
    c.trap.x_start = 15.0;
    c.trap.distance = 30.0;
    c.protocol.tf = 60.0;
    c.plan.record_stride = 100;
    c.sweep.omega0_list = {0.5};
    c.sweep.tf_grid = {20.0, 40.0, 60.0, 80.0};
    c.map.omega0_list = {0.5};
    c.map.d_grid = {10.0, 20.0};
    c.map.tf_grid = arange(5.0, 60.0, 5.0);
    c.map.refine_step = 2.5;
    c.disorder.deltas = {0.0, 0.05, 0.1};
    c.disorder.realizations = 4;
    c.disorder.tf = 60.0;
    return c;
}

}  // namespace

TEST_CASE("arange") {
    const auto g = arange(50.0, 700.0, 10.0);
    CHECK(g.size() == 66);
    CHECK(g.front() == 50.0);
    CHECK(g.back() == 700.0);
    CHECK(arange(0.0, 1.0, 0.1).size() == 11);
    CHECK(arange(3.0, 3.0, 1.0).size() == 1);
}

TEST_CASE("config json round trip") {
    RunConfig c = small_config();
    c.trap.omega_f = 0.25;
    c.trap.sigma_override = 2.5;
    c.chain.disorder_mode = DisorderMode::HoppingOnly;
    c.workers = 3;
    const RunConfig back = config_from_json(config_to_json(c));
    CHECK(back == c);
    CHECK(dump_config(back) == dump_config(c));
    CHECK(config_from_json(nlohmann::json::object()) == RunConfig{});

    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    save_config(c, dir / "c.json");
    CHECK(load_config(dir / "c.json") == c);
}

TEST_CASE("config rejects bad documents") {
    using nlohmann::json;
    CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"trap", {{"omega", 0.5}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"protocol", {{"name", "bang-bang"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"sweep", {{"tf_grid", json::array()}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"sweep", {{"tf_grid", {10.0, -5.0}}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"map", {{"threshold", 1.5}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"disorder", {{"realizations", 0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"chain", {{"disorder_mode", "sites"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"workers", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"trap", {{"distance", 500.0}}}}), std::invalid_argument);
    CHECK_THROWS(load_config("/nonexistent/magnon.json"));

    const fs::path dir = scratch("badjson");
    fs::create_directories(dir);
    std::ofstream(dir / "broken.json") << "{ \"chain\": ";
    try {
        load_config(dir / "broken.json");
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
    }
}

TEST_CASE("make_protocol") {
    TrapConfig trap;
    CHECK(make_protocol("sta", trap, 200.0).position(200.0) == doctest::Approx(200.0));
    CHECK(make_protocol("linear", trap, 200.0).position(100.0) == doctest::Approx(125.0));
    CHECK(make_protocol("inverse", trap, 200.0).position(200.0) == doctest::Approx(200.0));
    CHECK_THROWS_AS(make_protocol("teleport", trap, 200.0), std::invalid_argument);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(150.0) == "150");
    CHECK(format_number(-2.5) == "-2.5");
    for (double v : {0.998123456789012, 1e-17, 1.0 / 3.0, 6.02e23}) {
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("csv writer and reader") {
    const fs::path dir = scratch("csv");
    ensure_directory(dir / "nested");
    {
        CsvWriter csv(dir / "nested" / "t.csv", {"a", "b", "c"});
        csv.field(1.5).field(2).field("x").end_row();
        csv.field(-0.0).field(static_cast<unsigned long long>(18446744073709551615ULL)).field("y").end_row();
        CHECK_THROWS_AS(csv.field(1.0).end_row(), std::logic_error);
    }
    {
        CsvWriter csv(dir / "ok.csv", {"a", "b"});
        csv.field(1.0).field(2.0).end_row();
        csv.close();
        CHECK(slurp(dir / "ok.csv") == "a,b\n1,2\n");
    }
    const CsvTable table = read_csv(dir / "ok.csv");
    CHECK(table.header == std::vector<std::string>{"a", "b"});
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0][1] == "2");

    try {
        CsvWriter csv("/nonexistent_dir/x.csv", {"a"});
        FAIL("expected an I/O error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("/nonexistent_dir/x.csv") != std::string::npos);
    }
    CHECK_THROWS(read_csv(dir / "missing.csv"));
}

TEST_CASE("parallel_for") {
    for (int workers : {1, 2, 4, 16}) {
        std::vector<int> out(1000, 0);
        parallel_for(out.size(), workers, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
    }
    int calls = 0;
    parallel_for(0, 4, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
    CHECK_THROWS_WITH_AS(parallel_for(50, 4,
                                      [](std::size_t i) {
                                          if (i == 7) throw std::runtime_error("seven");
                                      }),
                         "seven", std::runtime_error);
}

TEST_CASE("analysis helpers") {
    const Curve rising{{0.0, 0.0}, {1.0, 0.2}, {2.0, 0.6}, {3.0, 0.4}, {4.0, 0.9}};
    CHECK(*first_upward_crossing(rising, 0.5) == doctest::Approx(1.75));
    CHECK(*first_upward_crossing(rising, 0.8) == doctest::Approx(3.8));
    CHECK_FALSE(first_upward_crossing(rising, 0.95).has_value());
    CHECK_FALSE(first_upward_crossing({{0.0, 0.7}, {1.0, 0.9}}, 0.5).has_value());

    CHECK(fit_through_origin({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) == doctest::Approx(2.0));
    CHECK(fit_through_origin({1.0, 2.0}, {1.0, 3.0}) == doctest::Approx(7.0 / 5.0));
    CHECK_THROWS_AS(fit_through_origin({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(fit_through_origin({1.0}, {1.0, 2.0}), std::invalid_argument);

    const std::vector<double> x{0.01, 0.05, 0.1, 0.2};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const QuadraticFit exact = fit_quadratic_through_origin(x, y);
    CHECK(exact.coefficient == doctest::Approx(3.0));
    CHECK(exact.r_squared == doctest::Approx(1.0));
    CHECK(exact.points == 4);
    const QuadraticFit linear = fit_quadratic_through_origin(x, x);
    CHECK(linear.r_squared < 0.95);
}

TEST_CASE("ensemble summary") {
    const std::vector<EnsembleRecord> records{
        {0.1, 0, 1, 0.9}, {0.1, 1, 2, 0.8}, {0.1, 2, 3, 1.0}, {0.0, 0, 4, 0.5}};
    const auto s = summarize(records);
    REQUIRE(s.size() == 2);
    CHECK(s[0].delta == 0.1);
    CHECK(s[0].count == 3);
    CHECK(s[0].mean == doctest::Approx(0.9));
    CHECK(s[0].std == doctest::Approx(0.1));
    CHECK(s[1].std == 0.0);
}

TEST_CASE("evolution outputs") {
    RunConfig c = small_config();
    c.output.directory = scratch("evolve").string();
    const EvolutionResult r = run_evolution(c);
    CHECK(r.final_fidelity > 0.99);
    CHECK(r.times.front() == 0.0);
    CHECK(r.times.back() == 60.0);
    for (const auto* name : {"heatmap.csv", "fidelity.csv", "trap_boundary.csv", "centroid.csv",
                             "heatmap.svg", "metadata.json"}) {
        CHECK(fs::exists(fs::path(c.output.directory) / name));
    }
    const CsvTable heat = read_csv(fs::path(c.output.directory) / "heatmap.csv");
    CHECK(heat.header == std::vector<std::string>{"t", "site", "x_n", "sz"});
    CHECK(heat.rows.size() == r.times.size() * 61);
    CHECK(heat.rows.front()[1] == "1");
    const CsvTable fid = read_csv(fs::path(c.output.directory) / "fidelity.csv");
    CHECK(std::stod(fid.rows.back()[1]) == r.final_fidelity);
    CHECK(slurp(fs::path(c.output.directory) / "heatmap.svg").find("<svg") != std::string::npos);
    const auto meta = nlohmann::json::parse(slurp(fs::path(c.output.directory) / "metadata.json"));
    CHECK(meta["command"] == "evolve");
    CHECK(config_from_json(meta["config"]) == c);
}

TEST_CASE("zero-distance transport leaves the packet in place") {
    RunConfig c = small_config();
    c.trap.distance = 0.0;
    const ChainSpec chain = c.chain_spec();
    CHECK(transport_fidelity(c, chain, c.trap, "sta", 40.0) >= 0.999);
}

TEST_CASE("outputs are identical for serial and parallel runs") {
    RunConfig serial = small_config();
    RunConfig parallel = small_config();
    parallel.workers = 4;

    auto check_same = [](const fs::path& a, const fs::path& b, std::initializer_list<const char*> files) {
        for (const char* f : files) {
            INFO(f);
            CHECK(slurp(a / f) == slurp(b / f));
            CHECK(!slurp(a / f).empty());
        }
    };

    SUBCASE("sweep") {
        serial.output.directory = scratch("sweep_serial").string();
        parallel.output.directory = scratch("sweep_parallel").string();
        const auto r = run_tf_sweep(serial);
        run_tf_sweep(parallel);
        CHECK(r.records.size() == 8);
        CHECK(r.records.front().protocol == "linear");
        check_same(serial.output.directory, parallel.output.directory, {"sweep.csv", "peaks.csv"});
    }
    SUBCASE("map") {
        serial.output.directory = scratch("map_serial").string();
        parallel.output.directory = scratch("map_parallel").string();
        const auto r = run_dt_map(serial);
        run_dt_map(parallel);
        REQUIRE(r.transitions.size() == 2);
        for (const auto& t : r.transitions) CHECK(t.t_star.has_value());
        CHECK(*r.transitions[1].t_star > *r.transitions[0].t_star);
        REQUIRE(r.speed_limits.size() == 1);
        CHECK(r.speed_limits[0].v_b > 0.0);
        CHECK(r.speed_limits[0].v_b < kGroupVelocityBound);
        CHECK(r.records.size() > 2 * serial.map.tf_grid.size());
        check_same(serial.output.directory, parallel.output.directory,
                   {"dt_map.csv", "transitions.csv", "speed_limit.csv"});
    }
    SUBCASE("disorder") {
        serial.output.directory = scratch("dis_serial").string();
        parallel.output.directory = scratch("dis_parallel").string();
        const auto r = run_disorder_ensemble(serial);
        run_disorder_ensemble(parallel);
        CHECK(r.records.size() == 12);
        REQUIRE(r.summary.size() == 3);
        CHECK(r.summary[0].std == 0.0);
        CHECK(r.summary[1].mean > r.summary[2].mean);
        CHECK(r.fit.points == 2);
        check_same(serial.output.directory, parallel.output.directory,
                   {"ensemble.csv", "summary.csv", "ensemble_series.csv", "fit.csv"});
        const fs::path again = scratch("dis_again");
        serial.output.directory = again.string();
        run_disorder_ensemble(serial);
        check_same(again, parallel.output.directory, {"ensemble.csv", "summary.csv"});
    }
}

TEST_CASE("field dump") {
    RunConfig c = small_config();
    c.output.directory = scratch("field").string();
    run_field_dump(c);
    const CsvTable t = read_csv(fs::path(c.output.directory) / "field.csv");
    CHECK(t.header == std::vector<std::string>{"t", "site", "x_n", "b_n"});
    CHECK(t.rows.size() % 61 == 0);
    CHECK(t.rows.front()[0] == "0");
    CHECK(t.rows.back()[0] == "60");
    // The packet's start site sits at the bottom of the initial well.
    CHECK(t.rows[15][3] == "0");
    for (const auto& row : t.rows) CHECK(std::stod(row[3]) <= 0.0);
}
