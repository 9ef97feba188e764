#include "idgame/report_io.hpp"
#include "idgame/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace idgame {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSlotsHeader =
    "scenario,slot,d0_kwh,capacity_kwh,case,u_d,pi_d,u_lower,u_upper,residual,da_flexible_kwh,"
    "utility,utility_se,da_cost,da_cost_se,rd_revenue,rd_revenue_se,welfare,welfare_se,"
    "dso_cost,dso_cost_se,pre_demand_kwh,pre_demand_se,post_demand_kwh,post_demand_se,"
    "congestion_probability,congestion_probability_se,deficit_probability,deficit_probability_se,"
    "samples,seed";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& s) {
    T value{};
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw IoError("slots csv: bad number '" + s + "'");
    }
    return value;
}

ordered_json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"se", e.se}}; }

ordered_json solution_json(const EquilibriumSolution& s) {
    return {{"case", to_string(s.kind)},
            {"u_d", s.u_d},
            {"pi_d", s.pi_d},
            {"u_lower", s.u_lower},
            {"u_upper", s.u_upper},
            {"residual", s.residual},
            {"congestion_probability", s.congestion_probability},
            {"iterations", s.iterations}};
}

void flush(std::ostream& out) {
    if (!out) throw IoError("write failed");
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return {buf, end};
}

SlotRow to_row(const SlotReport& r) {
    SlotRow row;
    row.scenario = std::string(to_string(r.config.scenario));
    row.slot = r.config.index;
    row.d0 = r.config.d0;
    row.capacity = r.config.capacity;
    row.solution_case = std::string(to_string(r.solution.kind));
    row.u_d = r.solution.u_d;
    row.pi_d = r.solution.pi_d;
    row.u_lower = r.solution.u_lower;
    row.u_upper = r.solution.u_upper;
    row.residual = r.solution.residual;
    row.da_flexible_demand = r.da_flexible_demand;
    row.utility = r.utility;
    row.da_cost = r.da_cost;
    row.rd_revenue = r.rd_revenue;
    row.welfare = r.welfare;
    row.dso_cost = r.dso_cost;
    row.pre_demand = r.pre_demand;
    row.post_demand = r.post_demand;
    row.congestion_probability = r.congestion_probability;
    row.deficit_probability = r.deficit_probability;
    row.samples = r.config.samples;
    row.seed = r.config.seed;
    return row;
}

std::vector<SlotRow> to_rows(const HorizonReport& report) {
    std::vector<SlotRow> rows;
    for (const auto& run : report.runs) {
        for (const auto& slot : run.slots) rows.push_back(to_row(slot));
    }
    return rows;
}

ScenarioTotals totals(const ScenarioRun& run) {
    ScenarioTotals t;
    double var = 0.0;
    for (const auto& s : run.slots) {
        t.utility += s.utility.mean;
        t.rd_revenue += s.rd_revenue.mean;
        t.da_cost += s.da_cost.mean;
        t.welfare += s.welfare.mean;
        t.dso_cost += s.dso_cost.mean;
        t.da_demand += s.config.d0 + s.da_flexible_demand;
        var += s.welfare.se * s.welfare.se;
    }
    t.welfare_se = std::sqrt(var);
    return t;
}

void write_slots_csv(std::ostream& out, const HorizonReport& report) {
    out << kSlotsHeader << '\n';
    for (const auto& row : to_rows(report)) {
        auto f = [](double x) { return format_double(x); };
        auto e = [&](const Estimate& x) { return f(x.mean) + ',' + f(x.se); };
        out << row.scenario << ',' << row.slot << ',' << f(row.d0) << ',' << f(row.capacity) << ','
            << row.solution_case << ',' << f(row.u_d) << ',' << f(row.pi_d) << ',' << f(row.u_lower) << ','
            << f(row.u_upper) << ',' << f(row.residual) << ',' << f(row.da_flexible_demand) << ','
            << e(row.utility) << ',' << e(row.da_cost) << ',' << e(row.rd_revenue) << ',' << e(row.welfare)
            << ',' << e(row.dso_cost) << ',' << e(row.pre_demand) << ',' << e(row.post_demand) << ','
            << e(row.congestion_probability) << ',' << e(row.deficit_probability) << ',' << row.samples
            << ',' << row.seed << '\n';
    }
    flush(out);
}

std::vector<SlotRow> read_slots_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSlotsHeader) throw IoError("slots csv: unexpected header");
    std::vector<SlotRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 31) throw IoError("slots csv: expected 31 columns, got " + std::to_string(cells.size()));
        std::size_t c = 0;
        auto d = [&] { return parse_number<double>(cells[c++]); };
        auto e = [&] {
            Estimate x;
            x.mean = d();
            x.se = d();
            return x;
        };
        SlotRow row;
        row.scenario = cells[c++];
        row.slot = parse_number<std::size_t>(cells[c++]);
        row.d0 = d();
        row.capacity = d();
        row.solution_case = cells[c++];
        row.u_d = d();
        row.pi_d = d();
        row.u_lower = d();
        row.u_upper = d();
        row.residual = d();
        row.da_flexible_demand = d();
        row.utility = e();
        row.da_cost = e();
        row.rd_revenue = e();
        row.welfare = e();
        row.dso_cost = e();
        row.pre_demand = e();
        row.post_demand = e();
        row.congestion_probability = e();
        row.deficit_probability = e();
        row.samples = parse_number<std::size_t>(cells[c++]);
        row.seed = parse_number<std::uint64_t>(cells[c++]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_curves_csv(std::ostream& out, const HorizonReport& report) {
    out << "scenario,slot,utility,pr_trade_da,pr_trade_rd,welfare_per_kwh\n";
    for (const auto& run : report.runs) {
        for (const auto& slot : run.slots) {
            for (const auto& p : slot.curves) {
                out << to_string(run.scenario) << ',' << slot.config.index << ',' << format_double(p.utility) << ','
                    << format_double(p.pr_trade_da) << ',' << format_double(p.pr_trade_rd) << ','
                    << format_double(p.welfare_per_kwh) << '\n';
            }
        }
    }
    flush(out);
}

void write_deltas_csv(std::ostream& out, const HorizonReport& report) {
    out << "slot,welfare_diff,utility_diff,da_cost_diff,rd_revenue_diff,da_demand_diff_kwh\n";
    for (const auto& d : report.deltas) {
        out << d.slot << ',' << format_double(d.welfare) << ',' << format_double(d.utility) << ','
            << format_double(d.da_cost) << ',' << format_double(d.rd_revenue) << ',' << format_double(d.da_demand)
            << '\n';
    }
    flush(out);
}

void write_solutions_csv(std::ostream& out, const std::vector<std::pair<Scenario, EquilibriumSolution>>& rows) {
    out << "scenario,case,u_d,pi_d,u_lower,u_upper,residual,congestion_probability,iterations\n";
    for (const auto& [scenario, s] : rows) {
        out << to_string(scenario) << ',' << to_string(s.kind) << ',' << format_double(s.u_d) << ','
            << format_double(s.pi_d) << ',' << format_double(s.u_lower) << ',' << format_double(s.u_upper) << ','
            << format_double(s.residual) << ',' << format_double(s.congestion_probability) << ','
            << s.iterations << '\n';
    }
    flush(out);
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
    out << "iteration,lower,upper,midpoint,gap\n";
    for (const auto& s : trace.steps) {
        out << s.iteration << ',' << format_double(s.lower) << ',' << format_double(s.upper) << ','
            << format_double(s.midpoint) << ',' << format_double(s.gap) << '\n';
    }
    flush(out);
}

void write_summary_json(std::ostream& out, const HorizonReport& report) {
    ordered_json doc;
    std::size_t slots = report.runs.empty() ? 0 : report.runs.front().slots.size();
    doc["slots"] = slots;
    ordered_json scenarios = ordered_json::object();
    for (const auto& run : report.runs) {
        const auto t = totals(run);
        scenarios[std::string(to_string(run.scenario))] = {
            {"Utility", t.utility},
            {"Redispatch revenue", t.rd_revenue},
            {"Day-ahead cost", -t.da_cost},
            {"Welfare", t.welfare},
            {"Welfare standard error", t.welfare_se},
            {"DSO redispatch cost", t.dso_cost},
            {"Day-ahead demand (kWh)", t.da_demand}};
    }
    doc["scenarios"] = scenarios;
    const auto* a = report.find(Scenario::Anticipatory);
    const auto* n = report.find(Scenario::Naive);
    if (a && n) doc["Welfare difference"] = totals(*a).welfare - totals(*n).welfare;
    out << doc.dump(2) << '\n';
    flush(out);
}

void write_report_json(std::ostream& out, const HorizonReport& report) {
    ordered_json doc;
    ordered_json runs = ordered_json::array();
    for (const auto& run : report.runs) {
        ordered_json slots = ordered_json::array();
        for (const auto& s : run.slots) {
            ordered_json curves = ordered_json::array();
            for (const auto& p : s.curves) {
                curves.push_back({p.utility, p.pr_trade_da, p.pr_trade_rd, p.welfare_per_kwh});
            }
            slots.push_back({{"slot", s.config.index},
                             {"d0_kwh", s.config.d0},
                             {"capacity_kwh", s.config.capacity},
                             {"samples", s.config.samples},
                             {"seed", s.config.seed},
                             {"solution", solution_json(s.solution)},
                             {"da_flexible_kwh", s.da_flexible_demand},
                             {"utility", estimate_json(s.utility)},
                             {"da_cost", estimate_json(s.da_cost)},
                             {"rd_revenue", estimate_json(s.rd_revenue)},
                             {"welfare", estimate_json(s.welfare)},
                             {"dso_cost", estimate_json(s.dso_cost)},
                             {"pre_demand_kwh", estimate_json(s.pre_demand)},
                             {"post_demand_kwh", estimate_json(s.post_demand)},
                             {"congestion_probability", estimate_json(s.congestion_probability)},
                             {"deficit_probability", estimate_json(s.deficit_probability)},
                             {"curve_columns", {"utility", "pr_trade_da", "pr_trade_rd", "welfare_per_kwh"}},
                             {"curves", curves}});
        }
        runs.push_back({{"scenario", to_string(run.scenario)}, {"slots", slots}});
    }
    doc["runs"] = runs;
    ordered_json deltas = ordered_json::array();
    for (const auto& d : report.deltas) {
        deltas.push_back({{"slot", d.slot},
                          {"welfare_diff", d.welfare},
                          {"utility_diff", d.utility},
                          {"da_cost_diff", d.da_cost},
                          {"rd_revenue_diff", d.rd_revenue},
                          {"da_demand_diff_kwh", d.da_demand}});
    }
    doc["deltas"] = deltas;
    out << doc.dump(2) << '\n';
    flush(out);
}

void write_solutions_json(std::ostream& out, const std::vector<std::pair<Scenario, EquilibriumSolution>>& rows) {
    ordered_json doc = ordered_json::array();
    for (const auto& [scenario, s] : rows) {
        auto j = solution_json(s);
        j["scenario"] = to_string(scenario);
        doc.push_back(j);
    }
    out << doc.dump(2) << '\n';
    flush(out);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << contents;
    file.close();
    if (!file) throw IoError("failed writing " + path.string());
}

void write_horizon_files(const std::filesystem::path& dir, const HorizonReport& report, bool structured) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    auto emit = [&](const char* name, auto&& writer) {
        std::ostringstream buf;
        writer(buf, report);
        write_text_file(dir / name, buf.str());
    };
    if (structured) {
        emit("report.json", write_report_json);
    } else {
        emit("slots.csv", write_slots_csv);
        emit("curves.csv", write_curves_csv);
        if (!report.deltas.empty()) emit("deltas.csv", write_deltas_csv);
    }
    emit("summary.json", write_summary_json);
}

}  // namespace idgame
