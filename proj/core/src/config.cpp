#include "idgame/config.hpp"
#include "idgame/errors.hpp"
#include "idgame/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace idgame {

namespace {

using nlohmann::json;

// Walks a JSON object while tracking its pointer path for diagnostics.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail("expected an object");
    }

    void allow(std::initializer_list<std::string_view> keys) const {
        for (const auto& item : node_.items()) {
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
                throw ConfigError(path_ + "/" + item.key(), "unknown key");
            }
        }
    }

    bool has(const std::string& key) const { return node_.contains(key); }
    std::string at(const std::string& key) const { return path_ + "/" + key; }

    std::optional<Section> section(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return Section(node_.at(key), at(key));
    }

    const json& raw(const std::string& key) const { return node_.at(key); }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return as_number(node_.at(key), at(key));
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_number_unsigned()) throw ConfigError(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_.empty() ? "/" : path_, what); }

    static double as_number(const json& v, const std::string& where) {
        if (!v.is_number()) throw ConfigError(where, "expected a number");
        return v.get<double>();
    }

private:
    const json& node_;
    std::string path_;
};

std::vector<double> number_list(const json& v, const std::string& where, double scale) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>() * scale);
        return out;
    }
    if (!v.is_array() || v.empty()) throw ConfigError(where, "expected a number or a non-empty array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(Section::as_number(v[i], where + "/" + std::to_string(i)) * scale);
    }
    return out;
}

// Reads key_kwh or key_mw (x1000), never both.
std::optional<std::vector<double>> energy(const Section& s, const std::string& key) {
    const bool kwh = s.has(key + "_kwh");
    const bool mw = s.has(key + "_mw");
    if (kwh && mw) throw ConfigError(s.at(key + "_mw"), "give either " + key + "_kwh or " + key + "_mw");
    if (kwh) return number_list(s.raw(key + "_kwh"), s.at(key + "_kwh"), 1.0);
    if (mw) return number_list(s.raw(key + "_mw"), s.at(key + "_mw"), 1000.0);
    return std::nullopt;
}

template <class F>
auto checked(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ConfigError(where, e.what());
    }
}

SupplyCurve parse_supply(const Section& s) {
    const auto kind = s.text("kind", "power_law");
    if (kind == "power_law") {
        s.allow({"kind", "scale", "reference_kwh", "exponent"});
        PowerLaw p;
        p.scale = s.number("scale", p.scale);
        p.reference = s.number("reference_kwh", p.reference);
        p.exponent = s.number("exponent", p.exponent);
        return checked(s.at("kind"), [&] { return SupplyCurve(p); });
    }
    if (kind == "fixed_price") {
        s.allow({"kind", "price"});
        if (!s.has("price")) s.fail("fixed_price needs a price");
        return checked(s.at("price"), [&] { return SupplyCurve::fixed(s.number("price", 0.0)); });
    }
    if (kind == "piecewise_linear") {
        s.allow({"kind", "knots"});
        if (!s.has("knots") || !s.raw("knots").is_array()) s.fail("piecewise_linear needs a knots array");
        PiecewiseLinear p;
        const auto& knots = s.raw("knots");
        for (std::size_t i = 0; i < knots.size(); ++i) {
            const auto where = s.at("knots") + "/" + std::to_string(i);
            if (!knots[i].is_array() || knots[i].size() != 2) throw ConfigError(where, "expected [quantity_kwh, price]");
            p.knots.emplace_back(Section::as_number(knots[i][0], where + "/0"),
                                 Section::as_number(knots[i][1], where + "/1"));
        }
        return checked(s.at("knots"), [&] { return SupplyCurve(p); });
    }
    throw ConfigError(s.at("kind"), "unknown supply kind '" + kind + "' (power_law, fixed_price, piecewise_linear)");
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return std::to_string(line) + ":" + std::to_string(column);
}

}  // namespace

RunConfig::RunConfig() : d0_profile(default_d0_profile()), capacity{120'000.0} {}

double RunConfig::capacity_at(std::size_t slot) const {
    return capacity.size() == 1 ? capacity.front() : capacity.at(slot);
}

std::vector<SlotConfig> RunConfig::slot_configs() const {
    std::vector<SlotConfig> slots;
    for (std::size_t t = 0; t < d0_profile.size(); ++t) {
        SlotConfig s;
        s.index = t;
        s.d0 = d0_profile[t];
        s.capacity = capacity_at(t);
        s.supply = supply;
        s.sigma = sigma;
        s.truncation = truncation;
        s.rule = solver.rule;
        s.samples = samples;
        s.seed = slot_seed(seed, t);
        s.quadrature_nodes = quadrature_nodes;
        s.solver = solver;
        slots.push_back(std::move(s));
    }
    return slots;
}

std::vector<double> default_d0_profile() {
    return {74'000, 76'000, 75'000, 74'000, 72'000, 70'000, 64'000, 58'000, 52'000, 48'000, 46'000, 45'000,
            45'000, 46'000, 48'000, 51'000, 55'000, 58'000, 60'000, 62'000, 64'000, 66'000, 68'000, 72'000};
}

std::uint64_t slot_seed(std::uint64_t run_seed, std::size_t slot) {
    return numeric::counter_hash(run_seed, 0x5107, slot);
}

Scenario parse_scenario(std::string_view name) {
    if (name == "anticipatory") return Scenario::Anticipatory;
    if (name == "naive") return Scenario::Naive;
    throw ConfigError("", "unknown scenario '" + std::string(name) + "' (anticipatory, naive)");
}

IndifferenceRule parse_rule(std::string_view name) {
    if (name == "optimistic") return IndifferenceRule::Optimistic;
    if (name == "pessimistic") return IndifferenceRule::Pessimistic;
    throw ConfigError("", "unknown indifference rule '" + std::string(name) + "' (optimistic, pessimistic)");
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "structured") return OutputFormat::Structured;
    throw ConfigError("", "unknown format '" + std::string(name) + "' (csv, structured)");
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(line_column(text, e.byte), "syntax error: " + std::string(e.what()));
    }

    RunConfig cfg;
    const Section root(doc, "");
    root.allow({"population", "supply", "network", "uncertainty", "solver", "simulation", "output", "solve"});

    if (auto s = root.section("population")) {
        s->allow({"agent_count", "utility_min", "utility_max", "emax_min_kwh", "emax_max_kwh", "seed"});
        auto& p = cfg.population;
        p.agent_count = s->count("agent_count", p.agent_count);
        p.utility_min = s->number("utility_min", p.utility_min);
        p.utility_max = s->number("utility_max", p.utility_max);
        p.emax_min = s->number("emax_min_kwh", p.emax_min);
        p.emax_max = s->number("emax_max_kwh", p.emax_max);
        cfg.population_seed = s->count("seed", cfg.population_seed);
        checked("/population", [&] { p.validate(); return 0; });
    }
    if (auto s = root.section("supply")) cfg.supply = parse_supply(*s);

    if (auto s = root.section("network")) {
        s->allow({"d0_kwh", "d0_mw", "capacity_kwh", "capacity_mw"});
        if (auto d0 = energy(*s, "d0")) cfg.d0_profile = *d0;
        if (auto c = energy(*s, "capacity")) cfg.capacity = *c;
        const auto where = s->has("capacity_mw") ? s->at("capacity_mw") : s->at("capacity_kwh");
        if (cfg.capacity.size() != 1 && cfg.capacity.size() != cfg.d0_profile.size()) {
            throw ConfigError(where, "capacity needs one value or one per d0 entry");
        }
        for (double c : cfg.capacity) {
            if (!(c > 0.0)) throw ConfigError(where, "capacity must be positive");
        }
        for (double d : cfg.d0_profile) {
            if (!(d >= 0.0)) throw ConfigError(s->has("d0_mw") ? s->at("d0_mw") : s->at("d0_kwh"), "d0 must be >= 0");
        }
    }
    if (auto s = root.section("uncertainty")) {
        s->allow({"sigma_kwh", "sigma_mw", "truncation"});
        if (auto sigma = energy(*s, "sigma")) {
            if (sigma->size() != 1) throw ConfigError(s->at("sigma_kwh"), "expected a single number");
            cfg.sigma = sigma->front();
        }
        if (s->has("truncation")) {
            const auto& t = s->raw("truncation");
            cfg.truncation = t.is_null() ? std::nullopt
                                         : std::optional<double>(Section::as_number(t, s->at("truncation")));
        }
        checked("/uncertainty", [&] {
            UncertaintyModel{cfg.sigma, cfg.truncation, 0.0, 1.0}.validate();
            return 0;
        });
    }
    if (auto s = root.section("solver")) {
        s->allow({"tolerance", "max_iterations", "quadrature_nodes", "indifference_rule", "indifference_tolerance",
                  "certainty_margin"});
        auto& o = cfg.solver;
        o.tolerance = s->number("tolerance", o.tolerance);
        o.max_iterations = static_cast<int>(s->count("max_iterations", static_cast<std::uint64_t>(o.max_iterations)));
        cfg.quadrature_nodes =
            static_cast<int>(s->count("quadrature_nodes", static_cast<std::uint64_t>(cfg.quadrature_nodes)));
        o.indifference_tolerance = s->number("indifference_tolerance", o.indifference_tolerance);
        o.certainty_margin = s->number("certainty_margin", o.certainty_margin);
        if (s->has("indifference_rule")) {
            try {
                o.rule = parse_rule(s->text("indifference_rule", ""));
            } catch (const ConfigError& e) {
                throw ConfigError(s->at("indifference_rule"), e.what());
            }
        }
        if (!(o.tolerance > 0.0)) throw ConfigError(s->at("tolerance"), "must be positive");
        if (o.max_iterations <= 0) throw ConfigError(s->at("max_iterations"), "must be positive");
        if (cfg.quadrature_nodes <= 0) throw ConfigError(s->at("quadrature_nodes"), "must be positive");
        if (!(o.indifference_tolerance >= 0.0)) throw ConfigError(s->at("indifference_tolerance"), "must be >= 0");
    }
    if (auto s = root.section("simulation")) {
        s->allow({"samples", "seed", "scenarios", "threads"});
        cfg.samples = s->count("samples", cfg.samples);
        cfg.seed = s->count("seed", cfg.seed);
        cfg.threads = static_cast<unsigned>(s->count("threads", cfg.threads));
        if (cfg.samples == 0) throw ConfigError(s->at("samples"), "must be >= 1");
        if (cfg.threads == 0) throw ConfigError(s->at("threads"), "must be >= 1");
        if (s->has("scenarios")) {
            const auto& list = s->raw("scenarios");
            if (!list.is_array() || list.empty()) throw ConfigError(s->at("scenarios"), "expected a non-empty array");
            cfg.scenarios.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto where = s->at("scenarios") + "/" + std::to_string(i);
                if (!list[i].is_string()) throw ConfigError(where, "expected a string");
                try {
                    const auto sc = parse_scenario(list[i].get<std::string>());
                    if (std::find(cfg.scenarios.begin(), cfg.scenarios.end(), sc) != cfg.scenarios.end()) {
                        throw ConfigError(where, "duplicate scenario");
                    }
                    cfg.scenarios.push_back(sc);
                } catch (const ConfigError& e) {
                    if (!e.where().empty()) throw;
                    throw ConfigError(where, e.what());
                }
            }
        }
    }
    if (auto s = root.section("output")) {
        s->allow({"dir", "format", "diagnostics"});
        cfg.output_dir = s->text("dir", cfg.output_dir.string());
        if (s->has("format")) {
            try {
                cfg.format = parse_format(s->text("format", ""));
            } catch (const ConfigError& e) {
                throw ConfigError(s->at("format"), e.what());
            }
        }
        cfg.diagnostics = s->boolean("diagnostics", cfg.diagnostics);
    }
    if (auto s = root.section("solve")) {
        s->allow({"slot"});
        cfg.solve_slot = s->count("slot", cfg.solve_slot);
        if (cfg.solve_slot >= cfg.d0_profile.size()) throw ConfigError(s->at("slot"), "slot outside the d0 profile");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_config(buf.str());
}

}  // namespace idgame
