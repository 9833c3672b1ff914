#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "addcomb/budgets.hpp"
#include "addcomb/constructions.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/group.hpp"
#include "addcomb/laws.hpp"
#include "addcomb/quantities.hpp"
#include "addcomb/spectral.hpp"

namespace addcomb {

using json = nlohmann::json;

/// Rounds to 12 significant digits; report values pass through this so that
/// serialized output is diff-stable and CSV/JSON agree byte for byte.
inline double round_sig12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", round_sig12(v));
    return buf;
}

enum class Command { Compute, Verify, Theorem, Construct, Search };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Compute: return "compute";
        case Command::Verify: return "verify";
        case Command::Theorem: return "theorem";
        case Command::Construct: return "construct";
        case Command::Search: return "search";
    }
    return "?";
}

inline Command command_from_name(const std::string& s) {
    for (Command c : {Command::Compute, Command::Verify, Command::Theorem, Command::Construct,
                      Command::Search})
        if (s == command_name(c)) return c;
    throw validation_error("unknown command: " + s);
}

struct ExperimentParams {
    std::vector<int> l_values{2};
    std::vector<int> s_values{1};
    std::vector<int> k_values{2};
    std::vector<std::int64_t> p_values{101};
    std::string objective = "cor";
    std::string variant = "quadratic_residues";
    int iterations = 200;
    std::int64_t target_size = 8;

    friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

/// One experiment: a group, set specs, a command and its parameters. The
/// JSON form round-trips losslessly and identical specs (seeds included)
/// produce byte-identical reports.
struct ExperimentSpec {
    std::vector<std::int64_t> group_orders;
    Command command = Command::Compute;
    SetSpec set_a;
    std::optional<SetSpec> set_b;
    std::vector<std::string> laws{"cor"};
    ExperimentParams params;
    std::uint64_t seed = 0;
    std::string format = "json";
    Budgets budgets;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

// ---------------------------------------------------------------------------
// SetSpec <-> JSON

inline json set_spec_to_json(const SetSpec& s) {
    json j;
    j["kind"] = set_kind_name(s.kind);
    switch (s.kind) {
        case SetKind::Explicit:
            j["elements"] = s.elements;
            break;
        case SetKind::Subgroup:
            j["generators"] = s.generators;
            break;
        case SetKind::RandomInSubgroup:
            j["generators"] = s.generators;
            j["density"] = s.density;
            j["seed"] = s.seed;
            break;
        case SetKind::HPlusLambda:
            j["dim_h"] = s.dim_h;
            j["n_lambda"] = s.n_lambda;
            break;
        case SetKind::QuadraticResidues:
            break;
        case SetKind::Progression:
            j["start"] = s.start;
            j["step"] = s.step;
            j["length"] = s.length;
            break;
        case SetKind::Random:
            if (s.count >= 0)
                j["count"] = s.count;
            else
                j["density"] = s.density;
            j["seed"] = s.seed;
            break;
    }
    return j;
}

inline SetSpec set_spec_from_json(const json& j, std::uint64_t default_seed = 0) {
    if (!j.is_object() || !j.contains("kind"))
        throw validation_error("set spec must be an object with a \"kind\" field");
    SetSpec s;
    s.kind = set_kind_from_name(j.at("kind").get<std::string>());
    s.seed = j.value("seed", default_seed);
    if (j.contains("elements")) s.elements = j.at("elements").get<std::vector<std::int64_t>>();
    if (j.contains("generators"))
        s.generators = j.at("generators").get<std::vector<std::int64_t>>();
    if (j.contains("density")) s.density = j.at("density").get<double>();
    if (j.contains("count")) s.count = j.at("count").get<std::int64_t>();
    if (j.contains("dim_h")) s.dim_h = j.at("dim_h").get<int>();
    if (j.contains("n_lambda")) s.n_lambda = j.at("n_lambda").get<int>();
    if (j.contains("start")) s.start = j.at("start").get<std::int64_t>();
    if (j.contains("step")) s.step = j.at("step").get<std::int64_t>();
    if (j.contains("length")) s.length = j.at("length").get<std::int64_t>();
    return s;
}

/// Parses the compact CLI form `kind:tok,tok,...`. Positional tokens are
/// element/generator indices (eJ names the J-th axis unit); key=value tokens
/// set parameters, e.g. `random:size=16`, `h_plus_lambda:dim_h=3,n_lambda=3`.
inline SetSpec parse_set_string(const std::string& text, const GroupSpec& g,
                                std::uint64_t seed) {
    SetSpec s;
    s.seed = seed;
    const auto colon = text.find(':');
    const std::string kind_name = text.substr(0, colon);
    s.kind = set_kind_from_name(kind_name);

    std::vector<std::int64_t> positional;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string tok =
                rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            pos = comma == std::string::npos ? rest.size() + 1 : comma + 1;
            if (tok.empty()) continue;
            const auto eq = tok.find('=');
            if (eq == std::string::npos) {
                if (tok[0] == 'e') {
                    const int axis = std::atoi(tok.c_str() + 1);
                    if (axis < 1 || axis > g.rank())
                        throw validation_error("axis unit out of range: " + tok);
                    positional.push_back(g.unit(axis - 1));
                } else {
                    positional.push_back(std::atoll(tok.c_str()));
                }
                continue;
            }
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "q" || key == "density") {
                s.density = std::atof(val.c_str());
            } else if (key == "size" || key == "count") {
                s.count = std::atoll(val.c_str());
            } else if (key == "dim_h") {
                s.dim_h = std::atoi(val.c_str());
            } else if (key == "n_lambda") {
                s.n_lambda = std::atoi(val.c_str());
            } else if (key == "a" || key == "start") {
                s.start = std::atoll(val.c_str());
            } else if (key == "d" || key == "step") {
                s.step = std::atoll(val.c_str());
            } else if (key == "m" || key == "length") {
                s.length = std::atoll(val.c_str());
            } else if (key == "seed") {
                s.seed = static_cast<std::uint64_t>(std::strtoull(val.c_str(), nullptr, 10));
            } else {
                throw validation_error("unknown set parameter: " + key);
            }
        }
    }
    if (s.kind == SetKind::Explicit) s.elements = positional;
    if (s.kind == SetKind::Subgroup || s.kind == SetKind::RandomInSubgroup)
        s.generators = positional;
    return s;
}

// ---------------------------------------------------------------------------
// ExperimentSpec <-> JSON

inline json experiment_to_json(const ExperimentSpec& e) {
    json j;
    j["group"] = e.group_orders;
    j["command"] = command_name(e.command);
    j["set"] = set_spec_to_json(e.set_a);
    if (e.set_b) j["set_b"] = set_spec_to_json(*e.set_b);
    j["laws"] = e.laws;
    j["seed"] = e.seed;
    j["format"] = e.format;
    json p;
    p["l"] = e.params.l_values;
    p["s"] = e.params.s_values;
    p["k"] = e.params.k_values;
    p["p"] = e.params.p_values;
    p["objective"] = e.params.objective;
    p["variant"] = e.params.variant;
    p["iterations"] = e.params.iterations;
    p["target_size"] = e.params.target_size;
    j["params"] = p;
    json b;
    b["max_n"] = e.budgets.max_group_size;
    b["naive_cutoff"] = e.budgets.naive_cutoff;
    b["max_tuples"] = e.budgets.max_tuples;
    b["max_dense"] = e.budgets.max_dense;
    b["max_combinations"] = e.budgets.max_combinations;
    j["budgets"] = b;
    return j;
}

inline ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec e;
    if (!j.is_object()) throw validation_error("experiment spec must be a JSON object");
    if (!j.contains("group")) throw validation_error("experiment spec needs a \"group\" field");
    e.group_orders = j.at("group").get<std::vector<std::int64_t>>();
    e.command = command_from_name(j.value("command", std::string("compute")));
    e.seed = j.value("seed", std::uint64_t{0});
    e.format = j.value("format", std::string("json"));
    if (e.format != "json" && e.format != "csv")
        throw validation_error("format must be json or csv");
    if (j.contains("set")) e.set_a = set_spec_from_json(j.at("set"), e.seed);
    if (j.contains("set_b")) e.set_b = set_spec_from_json(j.at("set_b"), e.seed);
    if (j.contains("laws")) e.laws = j.at("laws").get<std::vector<std::string>>();
    if (j.contains("params")) {
        const json& p = j.at("params");
        if (p.contains("l")) e.params.l_values = p.at("l").get<std::vector<int>>();
        if (p.contains("s")) e.params.s_values = p.at("s").get<std::vector<int>>();
        if (p.contains("k")) e.params.k_values = p.at("k").get<std::vector<int>>();
        if (p.contains("p")) e.params.p_values = p.at("p").get<std::vector<std::int64_t>>();
        if (p.contains("objective")) e.params.objective = p.at("objective").get<std::string>();
        if (p.contains("variant")) e.params.variant = p.at("variant").get<std::string>();
        if (p.contains("iterations")) e.params.iterations = p.at("iterations").get<int>();
        if (p.contains("target_size"))
            e.params.target_size = p.at("target_size").get<std::int64_t>();
    }
    if (j.contains("budgets")) {
        const json& b = j.at("budgets");
        if (b.contains("max_n")) e.budgets.max_group_size = b.at("max_n").get<std::int64_t>();
        if (b.contains("naive_cutoff"))
            e.budgets.naive_cutoff = b.at("naive_cutoff").get<std::int64_t>();
        if (b.contains("max_tuples")) e.budgets.max_tuples = b.at("max_tuples").get<std::int64_t>();
        if (b.contains("max_dense")) e.budgets.max_dense = b.at("max_dense").get<std::int64_t>();
        if (b.contains("max_combinations"))
            e.budgets.max_combinations = b.at("max_combinations").get<std::int64_t>();
    }
    return e;
}

// ---------------------------------------------------------------------------
// Report assembly

namespace detail {

inline json law_to_json(const LawReport& r, std::uint64_t seed) {
    json j;
    j["law"] = r.law;
    j["digest"] = r.digest;
    j["lhs"] = round_sig12(r.lhs);
    j["rhs"] = round_sig12(r.rhs);
    j["ratio"] = round_sig12(r.ratio);
    j["verdict"] = verdict_name(r.verdict);
    j["vacuous"] = r.vacuous;
    j["seed"] = seed;
    j["wall_time_ms"] = r.wall_time_ms;
    json pre = json::object();
    for (const auto& p : r.preconditions) {
        json entry;
        entry["value"] = round_sig12(p.value);
        if (p.holds >= 0) entry["holds"] = (p.holds == 1);
        pre[p.name] = entry;
    }
    j["preconditions"] = pre;
    json extras = json::object();
    for (const auto& [k, v] : r.extras) extras[k] = round_sig12(v);
    j["extras"] = extras;
    return j;
}

inline json report_to_json(const QuantityReport& r) {
    json j = json::object();
    for (const auto& [k, v] : r.scalars) j[k] = round_sig12(v);
    return j;
}

}  // namespace detail

struct RunResult {
    json report;
    int exit_code = 0;  // 0 ok, 1 a holds/fails law failed
};

/// Executes one experiment. Validation problems raise validation_error
/// (usage, exit 2 at the CLI); blown budgets raise resource_error (exit 3).
inline RunResult run(const ExperimentSpec& e) {
    const GroupSpec g = make_group(e.group_orders, e.budgets.max_group_size);
    json out;
    out["command"] = command_name(e.command);
    out["group"] = e.group_orders;
    out["seed"] = e.seed;

    std::vector<LawReport> law_rows;
    const auto needs_set = [&]() -> GroupSubset { return build(e.set_a, g, e.budgets); };

    switch (e.command) {
        case Command::Compute: {
            const GroupSubset a = needs_set();
            out["set"] = set_spec_to_json(e.set_a);
            if (e.set_b) {
                const GroupSubset b = build(*e.set_b, g, e.budgets);
                out["set_b"] = set_spec_to_json(*e.set_b);
                out["report"] = detail::report_to_json(compute_report(a, &b, {}, e.budgets));
            } else {
                out["report"] = detail::report_to_json(compute_report(a, nullptr, {}, e.budgets));
            }
            break;
        }
        case Command::Verify: {
            law_rows = run_identity_suite(g, e.seed, {}, e.budgets);
            break;
        }
        case Command::Theorem: {
            const GroupSubset a = needs_set();
            out["set"] = set_spec_to_json(e.set_a);
            std::optional<GroupSubset> b;
            if (e.set_b) {
                b = build(*e.set_b, g, e.budgets);
                out["set_b"] = set_spec_to_json(*e.set_b);
            }
            for (const std::string& law : e.laws) {
                if (law == "main") {
                    const auto [r1, r2] = eval_theorem_main(a, b ? *b : a, e.budgets);
                    law_rows.push_back(r1);
                    law_rows.push_back(r2);
                } else if (law == "cor") {
                    law_rows.push_back(eval_theorem_cor(a, e.budgets));
                } else if (law == "l") {
                    for (int l : e.params.l_values)
                        law_rows.push_back(eval_theorem_l(a, l, e.budgets));
                } else if (law == "k") {
                    for (int s : e.params.s_values) {
                        const auto [rp, rm] = eval_theorem_k(a, s, e.budgets);
                        law_rows.push_back(rp);
                        law_rows.push_back(rm);
                    }
                } else if (law == "energy") {
                    law_rows.push_back(eval_theorem_energy(a, e.budgets));
                } else if (law == "remark_energy") {
                    for (int k : e.params.k_values)
                        law_rows.push_back(eval_remark_energy(a, k, e.budgets));
                } else if (law == "remark_counterexample") {
                    const auto variant = e.params.variant == "random"
                                             ? CounterexampleVariant::RandomBalanced
                                             : CounterexampleVariant::QuadraticResidues;
                    for (std::int64_t p : e.params.p_values)
                        law_rows.push_back(
                            eval_remark_counterexample(p, variant, e.seed, e.budgets));
                } else {
                    throw validation_error("unknown law: " + law);
                }
            }
            break;
        }
        case Command::Construct: {
            const GroupSubset a = needs_set();
            out["set"] = set_spec_to_json(e.set_a);
            out["elements"] = a.indices();
            out["report"] = detail::report_to_json(compute_report(a, nullptr, {}, e.budgets));
            break;
        }
        case Command::Search: {
            const auto result = hill_climb_tightness(g, e.params.target_size, e.params.objective,
                                                     e.seed, e.params.iterations, e.budgets);
            json trace = json::array();
            for (double v : result.trace) trace.push_back(round_sig12(v));
            out["trace"] = trace;
            out["final_ratio"] = round_sig12(result.trace.back());
            out["best_elements"] = result.best.indices();
            out["report"] =
                detail::report_to_json(compute_report(result.best, nullptr, {}, e.budgets));
            break;
        }
    }

    int exit_code = 0;
    if (!law_rows.empty()) {
        json rows = json::array();
        for (const auto& r : law_rows) {
            rows.push_back(detail::law_to_json(r, e.seed));
            if (r.verdict == Verdict::Fails) exit_code = 1;
        }
        out["laws"] = rows;
    }
    return RunResult{out, exit_code};
}

// ---------------------------------------------------------------------------
// CSV rendering

/// Flat CSV with the same 12-significant-digit scalar values as the JSON.
inline std::string to_csv(const json& report) {
    std::string csv;
    const auto num = [](const json& v) {
        if (v.is_number_float()) return format_sig12(v.get<double>());
        if (v.is_number()) return v.dump();
        return std::string(v.is_string() ? v.get<std::string>() : v.dump());
    };
    if (report.contains("laws")) {
        csv += "law,lhs,rhs,ratio,verdict,vacuous,seed,digest\n";
        for (const auto& row : report.at("laws")) {
            csv += row.at("law").get<std::string>() + ",";
            csv += num(row.at("lhs")) + ",";
            csv += num(row.at("rhs")) + ",";
            csv += num(row.at("ratio")) + ",";
            csv += row.at("verdict").get<std::string>() + ",";
            csv += std::string(row.at("vacuous").get<bool>() ? "true" : "false") + ",";
            csv += num(row.at("seed")) + ",";
            csv += row.at("digest").get<std::string>() + "\n";
        }
        return csv;
    }
    if (report.contains("trace")) {
        csv += "iteration,ratio\n";
        std::size_t i = 0;
        for (const auto& v : report.at("trace")) {
            csv += std::to_string(i++) + "," + num(v) + "\n";
        }
        return csv;
    }
    if (report.contains("report")) {
        csv += "key,value\n";
        for (const auto& [k, v] : report.at("report").items()) csv += k + "," + num(v) + "\n";
        return csv;
    }
    return report.dump();
}

}  // namespace addcomb
