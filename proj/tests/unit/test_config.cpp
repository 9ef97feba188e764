#include "idgame/config.hpp"
#include "idgame/errors.hpp"

#include <doctest.h>

#include <string>

using namespace idgame;

namespace {
std::string where_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "no error";
}
}  // namespace

TEST_CASE("empty object gives the documented defaults") {
    const auto cfg = parse_config("{}");
    CHECK(cfg.population.agent_count == 10'000);
    CHECK(cfg.d0_profile.size() == 24);
    CHECK(cfg.capacity_at(5) == 120'000.0);
    CHECK(cfg.sigma == 10'000.0);
    CHECK(cfg.truncation == 6.0);
    CHECK(cfg.scenarios.size() == 2);
    CHECK(cfg.samples == 10'000);
    CHECK(cfg.solver.tolerance == 1e-9);
    CHECK(cfg.solver.max_iterations == 200);
    CHECK(cfg.quadrature_nodes == 129);
    CHECK(cfg.supply.kind() == "power_law");
}

TEST_CASE("full config with megawatt fields") {
    const auto cfg = parse_config(R"({
      "population": {"agent_count": 500, "utility_min": 0.02, "utility_max": 0.25, "emax_min_kwh": 2, "emax_max_kwh": 4, "seed": 3},
      "supply": {"kind": "fixed_price", "price": 0.1},
      "network": {"d0_mw": [70, 80], "capacity_mw": 110},
      "uncertainty": {"sigma_mw": 5, "truncation": null},
      "solver": {"tolerance": 1e-10, "indifference_rule": "pessimistic", "quadrature_nodes": 65},
      "simulation": {"samples": 100, "seed": 7, "scenarios": ["naive"], "threads": 2},
      "output": {"dir": "res", "format": "structured", "diagnostics": true},
      "solve": {"slot": 1}
    })");
    CHECK(cfg.d0_profile == std::vector<double>{70'000, 80'000});
    CHECK(cfg.capacity_at(1) == 110'000.0);
    CHECK(cfg.sigma == 5000.0);
    CHECK_FALSE(cfg.truncation.has_value());
    CHECK(cfg.supply.is_fixed_price());
    CHECK(cfg.solver.rule == IndifferenceRule::Pessimistic);
    CHECK(cfg.scenarios == std::vector<Scenario>{Scenario::Naive});
    CHECK(cfg.format == OutputFormat::Structured);
    CHECK(cfg.solve_slot == 1);
    const auto slots = cfg.slot_configs();
    REQUIRE(slots.size() == 2);
    CHECK(slots[1].d0 == 80'000.0);
    CHECK(slots[1].rule == IndifferenceRule::Pessimistic);
    CHECK(slots[0].seed != slots[1].seed);
    CHECK(slots[0].seed == slot_seed(7, 0));
}

TEST_CASE("syntax errors report line and column") {
    CHECK(where_of("{\n  \"population\": {,}\n}") == "2:18");
}

TEST_CASE("schema errors report a JSON pointer") {
    CHECK(where_of(R"({"bogus": 1})") == "/bogus");
    CHECK(where_of(R"({"population": {"agent_count": -3}})") == "/population/agent_count");
    CHECK(where_of(R"({"population": {"utility_min": 0.5}})") == "/population");
    CHECK(where_of(R"({"supply": {"kind": "magic"}})") == "/supply/kind");
    CHECK(where_of(R"({"supply": {"kind": "power_law", "exponent": 0.5}})") == "/supply/kind");
    CHECK(where_of(R"({"network": {"d0_kwh": [1, "x"]}})") == "/network/d0_kwh/1");
    CHECK(where_of(R"({"network": {"capacity_kwh": 1, "capacity_mw": 1}})") == "/network/capacity_mw");
    CHECK(where_of(R"({"network": {"d0_kwh": [1, 2, 3], "capacity_kwh": [1, 2]}})") == "/network/capacity_kwh");
    CHECK(where_of(R"({"simulation": {"scenarios": ["naive", "greedy"]}})") == "/simulation/scenarios/1");
    CHECK(where_of(R"({"simulation": {"samples": 0}})") == "/simulation/samples");
    CHECK(where_of(R"({"output": {"format": "xml"}})") == "/output/format");
    CHECK(where_of(R"({"solve": {"slot": 24}})") == "/solve/slot");
    CHECK(where_of(R"({"uncertainty": {"sigma_kwh": -1}})") == "/uncertainty");
    CHECK(where_of(R"([1, 2])") == "/");
}

TEST_CASE("missing config file is an I/O error") {
    CHECK_THROWS_AS(load_config("/nonexistent/idgame.json"), IoError);
}
