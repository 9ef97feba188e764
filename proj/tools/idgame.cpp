// idgame: solve, simulate and compare the day-ahead / redispatch game.
//
//   idgame solve    --config run.json [--scenario naive] [--format structured]
//   idgame simulate --config run.json --out results/ [--seed 7]
//   idgame compare  --config run.json [--out results/]
//
// Exit codes: 0 ok, 1 unexpected, 2 usage or config, 3 solver or model, 4 I/O.

#include "idgame/config.hpp"
#include "idgame/errors.hpp"
#include "idgame/report_io.hpp"
#include "idgame/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace idgame;

namespace {

enum Exit { kOk = 0, kUnexpected = 1, kConfig = 2, kModel = 3, kIo = 4 };

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
    std::vector<std::string> scenarios;
    bool diagnostics = false;
};

RunConfig resolve(const Options& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (!opt.format.empty()) cfg.format = parse_format(opt.format);
    if (!opt.scenarios.empty()) {
        cfg.scenarios.clear();
        for (const auto& name : opt.scenarios) {
            const auto s = parse_scenario(name);
            if (std::find(cfg.scenarios.begin(), cfg.scenarios.end(), s) == cfg.scenarios.end()) {
                cfg.scenarios.push_back(s);
            }
        }
    }
    if (opt.diagnostics) cfg.diagnostics = true;
    return cfg;
}

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

int cmd_solve(const Options& opt) {
    const auto cfg = resolve(opt);
    auto slot = cfg.slot_configs().at(cfg.solve_slot);

    std::vector<std::pair<Scenario, EquilibriumSolution>> rows;
    std::ostringstream traces;
    for (auto scenario : cfg.scenarios) {
        slot.scenario = scenario;
        SolverTrace trace;
        const auto sol = solve_slot(slot, cfg.population, &trace);
        rows.emplace_back(scenario, sol);

        std::cout << to_string(scenario) << " (slot " << slot.index << ", d0 " << fmt("%.0f", slot.d0)
                  << " kWh, capacity " << fmt("%.0f", slot.capacity) << " kWh)\n"
                  << "  case                    " << to_string(sol.kind) << '\n'
                  << "  u_d                     " << fmt("%.10f", sol.u_d) << " $/kWh\n"
                  << "  pi_d                    " << fmt("%.10f", sol.pi_d) << " $/kWh\n"
                  << "  residual                " << fmt("%.3e", sol.residual) << '\n'
                  << "  congestion probability  " << fmt("%.6f", sol.congestion_probability) << '\n';
        if (sol.kind == SolutionCase::Interval) {
            const double base = slot.d0;
            const auto mf = mean_field_from_spec(cfg.population);
            std::cout << "  interval                [" << fmt("%.10f", sol.u_lower) << ", "
                      << fmt("%.10f", sol.u_upper) << "]\n"
                      << "  pessimistic             u_d " << fmt("%.10f", sol.u_lower) << ", pi_d "
                      << fmt("%.10f", slot.supply.price(base + mf.phi(sol.u_lower))) << '\n'
                      << "  optimistic              u_d " << fmt("%.10f", sol.u_upper) << ", pi_d "
                      << fmt("%.10f", slot.supply.price(base + mf.phi(sol.u_upper))) << '\n';
        }
        if (cfg.diagnostics) {
            traces << "# " << to_string(scenario) << '\n';
            write_trace_csv(traces, trace);
        }
    }

    std::ostringstream machine;
    if (cfg.format == OutputFormat::Structured) {
        write_solutions_json(machine, rows);
    } else {
        write_solutions_csv(machine, rows);
    }
    if (opt.out_dir.empty()) {
        std::cout << '\n' << machine.str();
        if (cfg.diagnostics) std::cerr << traces.str();
    } else {
        std::filesystem::create_directories(cfg.output_dir);
        const char* name = cfg.format == OutputFormat::Structured ? "solution.json" : "solution.csv";
        write_text_file(cfg.output_dir / name, machine.str());
        if (cfg.diagnostics) write_text_file(cfg.output_dir / "diagnostics.csv", traces.str());
    }
    return kOk;
}

HorizonReport horizon(const RunConfig& cfg) {
    const auto slots = cfg.slot_configs();
    return run_horizon(slots, cfg.population, cfg.scenarios, cfg.threads);
}

void write_diagnostics(const RunConfig& cfg, const HorizonReport& report) {
    std::ostringstream out;
    out << "scenario,slot,case,iterations,residual,solver_congestion_probability,mc_congestion_probability,"
           "deficit_probability\n";
    for (const auto& run : report.runs) {
        for (const auto& s : run.slots) {
            out << to_string(run.scenario) << ',' << s.config.index << ',' << to_string(s.solution.kind) << ','
                << s.solution.iterations << ',' << format_double(s.solution.residual) << ','
                << format_double(s.solution.congestion_probability) << ','
                << format_double(s.congestion_probability.mean) << ',' << format_double(s.deficit_probability.mean)
                << '\n';
        }
    }
    write_text_file(cfg.output_dir / "diagnostics.csv", out.str());
}

int cmd_simulate(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto report = horizon(cfg);
    write_horizon_files(cfg.output_dir, report, cfg.format == OutputFormat::Structured);
    if (cfg.diagnostics) write_diagnostics(cfg, report);
    std::cout << "wrote " << report.runs.size() << " scenario(s) x " << cfg.d0_profile.size() << " slots to "
              << cfg.output_dir.string() << '\n';
    return kOk;
}

int cmd_compare(const Options& opt) {
    Options both = opt;
    both.scenarios = {"anticipatory", "naive"};
    const auto cfg = resolve(both);
    const auto report = horizon(cfg);
    const auto a = totals(*report.find(Scenario::Anticipatory));
    const auto n = totals(*report.find(Scenario::Naive));

    auto line = [](const char* label, double x, double y) {
        std::printf("%-22s %14.2f %14.2f %14.2f\n", label, x, y, x - y);
    };
    std::printf("%-22s %14s %14s %14s\n", "", "anticipatory", "naive", "difference");
    line("Utility", a.utility, n.utility);
    line("Redispatch revenue", a.rd_revenue, n.rd_revenue);
    line("Day-ahead cost", -a.da_cost, -n.da_cost);
    line("Welfare", a.welfare, n.welfare);
    std::printf("%-22s %14.2f %14.2f\n", "Welfare std. error", a.welfare_se, n.welfare_se);
    std::printf("\n%4s %10s %12s %14s %14s %12s\n", "slot", "d0_kwh", "pr_congest", "da_demand_ant", "da_demand_nai",
                "welfare_diff");
    const auto& ant = report.find(Scenario::Anticipatory)->slots;
    const auto& nai = report.find(Scenario::Naive)->slots;
    for (std::size_t t = 0; t < report.deltas.size(); ++t) {
        std::printf("%4zu %10.0f %12.6f %14.1f %14.1f %12.4f\n", t, ant[t].config.d0,
                    ant[t].solution.congestion_probability, ant[t].config.d0 + ant[t].da_flexible_demand,
                    nai[t].config.d0 + nai[t].da_flexible_demand, report.deltas[t].welfare);
    }
    if (!opt.out_dir.empty()) {
        write_horizon_files(cfg.output_dir, report, cfg.format == OutputFormat::Structured);
        if (cfg.diagnostics) write_diagnostics(cfg, report);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead / redispatch increase-decrease game"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON run configuration (defaults used when omitted)");
        sub->add_option("--seed", opt.seed, "Override simulation.seed");
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_option("--format", opt.format, "csv or structured")->check(CLI::IsMember({"csv", "structured"}));
        sub->add_option("--scenario", opt.scenarios, "anticipatory or naive; repeatable")
            ->check(CLI::IsMember({"anticipatory", "naive"}));
        sub->add_flag("--diagnostics", opt.diagnostics, "Write solver traces and per-slot diagnostics");
    };
    auto* solve = app.add_subcommand("solve", "Equilibrium of one slot (solve.slot in the config)");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo over the horizon; writes report files");
    auto* compare = app.add_subcommand("compare", "Anticipatory vs naive side by side");
    for (auto* sub : {solve, simulate, compare}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        return cmd_compare(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}
