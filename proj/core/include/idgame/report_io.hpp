#pragma once

#include "idgame/equilibrium.hpp"
#include "idgame/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace idgame {

/// One line of slots.csv. Numbers are written in shortest round-trip form,
/// so reading a row back gives exactly the values in memory.
struct SlotRow {
    std::string scenario;
    std::size_t slot = 0;
    double d0 = 0.0;
    double capacity = 0.0;
    std::string solution_case;
    double u_d = 0.0;
    double pi_d = 0.0;
    double u_lower = 0.0;
    double u_upper = 0.0;
    double residual = 0.0;
    double da_flexible_demand = 0.0;
    Estimate utility;
    Estimate da_cost;
    Estimate rd_revenue;
    Estimate welfare;
    Estimate dso_cost;
    Estimate pre_demand;
    Estimate post_demand;
    Estimate congestion_probability;
    Estimate deficit_probability;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const SlotRow&, const SlotRow&) = default;
};

SlotRow to_row(const SlotReport& report);
std::vector<SlotRow> to_rows(const HorizonReport& report);

/// Totals over the horizon for one scenario.
struct ScenarioTotals {
    double utility = 0.0;
    double rd_revenue = 0.0;
    double da_cost = 0.0;  ///< positive
    double welfare = 0.0;
    double welfare_se = 0.0;
    double dso_cost = 0.0;
    double da_demand = 0.0;  ///< sum over slots of d0 + phi(u_d), kWh
};
ScenarioTotals totals(const ScenarioRun& run);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

// CSV writers. Column order is fixed; see README.
void write_slots_csv(std::ostream& out, const HorizonReport& report);
std::vector<SlotRow> read_slots_csv(std::istream& in);
void write_curves_csv(std::ostream& out, const HorizonReport& report);
void write_deltas_csv(std::ostream& out, const HorizonReport& report);
void write_solutions_csv(std::ostream& out, const std::vector<std::pair<Scenario, EquilibriumSolution>>& rows);
void write_trace_csv(std::ostream& out, const SolverTrace& trace);

/// JSON document keyed by human-readable row labels ("Utility", "Redispatch
/// revenue", "Day-ahead cost", "Welfare"), plus "Welfare difference" when
/// both scenarios ran. Day-ahead cost is reported as a negative amount.
void write_summary_json(std::ostream& out, const HorizonReport& report);
/// Full report (every slot, curve and delta) as one JSON document.
void write_report_json(std::ostream& out, const HorizonReport& report);
void write_solutions_json(std::ostream& out, const std::vector<std::pair<Scenario, EquilibriumSolution>>& rows);

/// Writes slots.csv, curves.csv, deltas.csv (when present) and summary.json
/// into dir (created if missing); `structured` writes report.json instead of
/// the CSV files. Throws IoError on any file system failure.
void write_horizon_files(const std::filesystem::path& dir, const HorizonReport& report, bool structured);

/// Opens a file for writing or throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace idgame
