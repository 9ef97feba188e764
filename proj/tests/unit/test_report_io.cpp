#include "idgame/errors.hpp"
#include "idgame/report_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace idgame;

namespace {
HorizonReport small_report() {
    std::vector<SlotConfig> slots;
    for (std::size_t t = 0; t < 3; ++t) {
        SlotConfig s;
        s.index = t;
        s.d0 = 70'000 + 5000.0 * t;
        s.samples = 300;
        s.seed = 9 + t;
        slots.push_back(s);
    }
    const std::vector<Scenario> both{Scenario::Anticipatory, Scenario::Naive};
    return run_horizon(slots, PopulationSpec{}, both);
}
}  // namespace

TEST_CASE("shortest round-trip number formatting") {
    for (double x : {0.1, 1.0 / 3.0, 65'000.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("slots csv round-trips exactly") {
    const auto report = small_report();
    std::stringstream buf;
    write_slots_csv(buf, report);
    const auto rows = read_slots_csv(buf);
    CHECK(rows == to_rows(report));
    CHECK(rows.size() == 6);
    CHECK(rows[0].scenario == "anticipatory");
    CHECK(rows[3].scenario == "naive");
}

TEST_CASE("slots csv reader rejects damage") {
    std::stringstream bad_header("nope\n");
    CHECK_THROWS_AS(read_slots_csv(bad_header), IoError);
    std::stringstream out;
    write_slots_csv(out, small_report());
    auto text = out.str();
    text.replace(text.find("anticipatory,0,") + 15, 1, "x");
    std::stringstream damaged(text);
    CHECK_THROWS_AS(read_slots_csv(damaged), IoError);
}

TEST_CASE("summary uses the table labels") {
    std::stringstream buf;
    write_summary_json(buf, small_report());
    const auto doc = nlohmann::json::parse(buf.str());
    const auto& a = doc.at("scenarios").at("anticipatory");
    for (const char* key : {"Utility", "Redispatch revenue", "Day-ahead cost", "Welfare"}) CHECK(a.contains(key));
    CHECK(a.at("Day-ahead cost").get<double>() < 0.0);
    CHECK(doc.contains("Welfare difference"));
    CHECK(a.at("Welfare").get<double>() ==
          doctest::Approx(a.at("Utility").get<double>() + a.at("Day-ahead cost").get<double>() +
                          a.at("Redispatch revenue").get<double>()));
}

TEST_CASE("curves and deltas csv shapes") {
    const auto report = small_report();
    std::stringstream curves, deltas;
    write_curves_csv(curves, report);
    write_deltas_csv(deltas, report);
    int lines = 0;
    for (std::string l; std::getline(curves, l);) ++lines;
    CHECK(lines == 1 + 2 * 3 * static_cast<int>(kCurvePoints));
    lines = 0;
    for (std::string l; std::getline(deltas, l);) ++lines;
    CHECK(lines == 4);
}

TEST_CASE("horizon files land in the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "idgame_report_io_test";
    std::filesystem::remove_all(dir);
    write_horizon_files(dir, small_report(), false);
    for (const char* f : {"slots.csv", "curves.csv", "deltas.csv", "summary.json"}) {
        CHECK(std::filesystem::exists(dir / f));
    }
    write_horizon_files(dir / "structured", small_report(), true);
    CHECK(std::filesystem::exists(dir / "structured" / "report.json"));
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(write_text_file("/proc/idgame/nope.csv", "x"), IoError);
}
