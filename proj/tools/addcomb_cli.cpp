// Command-line front end: builds an ExperimentSpec from flags or a JSON
// document, runs it, and prints the report to stdout.
//
// Exit codes: 0 ok, 1 a holds/fails law failed, 2 usage error, 3 resource
// budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addcomb/addcomb.hpp"

namespace {

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::atoll(tok.c_str()));
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "addcomb: quantities and laws of additive combinatorics on finite abelian groups"};

    std::string spec_file;
    std::string group_text;
    std::string set_text;
    std::string set_b_text;
    std::string cmd_text = "compute";
    std::string laws_text;
    std::string format = "json";
    std::string objective = "cor";
    std::string variant = "quadratic_residues";
    std::uint64_t seed = 0;
    int iterations = 200;
    std::int64_t target_size = 8;
    std::string l_text, s_text, k_text, p_text;
    addcomb::Budgets budgets;

    app.add_option("--spec", spec_file,
                   "JSON experiment document ('-' reads stdin); overrides the other flags");
    app.add_option("--group", group_text, "cyclic orders, e.g. 2,2,2,2 or 1009");
    app.add_option("--set", set_text,
                   "set spec, e.g. subgroup:e1,e2 | explicit:0,1,3 | random:size=16 | "
                   "quadratic_residues | h_plus_lambda:dim_h=3,n_lambda=3 | "
                   "progression:a=0,d=2,m=5 | random_in_subgroup:e1,e2,q=0.5");
    app.add_option("--set-b", set_b_text, "second set spec (asymmetric laws)");
    app.add_option("--cmd", cmd_text, "compute | verify | theorem | construct | search");
    app.add_option("--laws", laws_text,
                   "comma list for 'theorem': main,cor,l,k,energy,remark_energy,"
                   "remark_counterexample");
    app.add_option("--format", format, "json | csv");
    app.add_option("--seed", seed, "64-bit seed for every random draw");
    app.add_option("--l", l_text, "l values for the rho_l law, e.g. 2,3");
    app.add_option("--s", s_text, "s values for the rho^(2s) law");
    app.add_option("--k", k_text, "k values for the energy product law");
    app.add_option("--p", p_text, "primes for the balanced counterexample");
    app.add_option("--variant", variant,
                   "counterexample variant: quadratic_residues | random");
    app.add_option("--iterations", iterations, "hill-climb iterations");
    app.add_option("--target-size", target_size, "hill-climb set size");
    app.add_option("--objective", objective, "hill-climb objective: cor | energy");
    app.add_option("--max-n", budgets.max_group_size, "largest admissible group size");
    app.add_option("--max-tuples", budgets.max_tuples, "tuple enumeration/storage budget");
    app.add_option("--max-dense", budgets.max_dense, "dense product-group array budget");
    app.add_option("--max-combos", budgets.max_combinations, "rho_l search budget");
    app.add_option("--dft-cutoff", budgets.naive_cutoff,
                   "largest N evaluated by the O(N^2) reference transform");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // --help prints usage, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // any flag-level problem is a usage error
    }

    try {
        addcomb::ExperimentSpec spec;
        if (!spec_file.empty()) {
            std::string text;
            if (spec_file == "-") {
                std::stringstream ss;
                ss << std::cin.rdbuf();
                text = ss.str();
            } else {
                std::ifstream in(spec_file);
                if (!in) throw addcomb::validation_error("cannot open spec file: " + spec_file);
                std::stringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            }
            addcomb::json doc;
            try {
                doc = addcomb::json::parse(text);
            } catch (const std::exception& ex) {
                throw addcomb::validation_error(std::string("spec is not valid JSON: ") +
                                                ex.what());
            }
            if (doc.is_array()) {
                // batch: run every experiment, report in input order
                addcomb::json reports = addcomb::json::array();
                int exit_code = 0;
                std::string csv;
                std::string batch_format = "json";
                for (const auto& entry : doc) {
                    const addcomb::ExperimentSpec one = addcomb::experiment_from_json(entry);
                    const addcomb::RunResult result = addcomb::run(one);
                    exit_code = std::max(exit_code, result.exit_code);
                    reports.push_back(result.report);
                    csv += addcomb::to_csv(result.report);
                    batch_format = one.format;
                }
                if (batch_format == "csv")
                    std::cout << csv;
                else
                    std::cout << reports.dump(2) << "\n";
                return exit_code;
            }
            spec = addcomb::experiment_from_json(doc);
        } else {
            if (group_text.empty())
                throw addcomb::validation_error("--group is required (or use --spec)");
            spec.group_orders = parse_int_list(group_text);
            spec.command = addcomb::command_from_name(cmd_text);
            spec.seed = seed;
            spec.format = format;
            spec.budgets = budgets;
            const addcomb::GroupSpec g =
                addcomb::make_group(spec.group_orders, budgets.max_group_size);
            if (!set_text.empty()) spec.set_a = addcomb::parse_set_string(set_text, g, seed);
            if (!set_b_text.empty()) spec.set_b = addcomb::parse_set_string(set_b_text, g, seed);
            if (!laws_text.empty()) spec.laws = parse_name_list(laws_text);
            if (!l_text.empty()) {
                spec.params.l_values.clear();
                for (auto v : parse_int_list(l_text)) spec.params.l_values.push_back(static_cast<int>(v));
            }
            if (!s_text.empty()) {
                spec.params.s_values.clear();
                for (auto v : parse_int_list(s_text)) spec.params.s_values.push_back(static_cast<int>(v));
            }
            if (!k_text.empty()) {
                spec.params.k_values.clear();
                for (auto v : parse_int_list(k_text)) spec.params.k_values.push_back(static_cast<int>(v));
            }
            if (!p_text.empty()) spec.params.p_values = parse_int_list(p_text);
            spec.params.objective = objective;
            spec.params.variant = variant;
            spec.params.iterations = iterations;
            spec.params.target_size = target_size;
        }

        const addcomb::RunResult result = addcomb::run(spec);
        if (spec.format == "csv")
            std::cout << addcomb::to_csv(result.report);
        else
            std::cout << result.report.dump(2) << "\n";
        return result.exit_code;
    } catch (const addcomb::resource_error& ex) {
        std::cerr << "resource error: " << ex.what();
        if (ex.partial_lower_bound)
            std::cerr << " (lower bound reached before the budget: " << *ex.partial_lower_bound
                      << ")";
        std::cerr << "\n";
        return 3;
    } catch (const addcomb::size_error& ex) {
        std::cerr << "resource error: " << ex.what() << "\n";
        return 3;
    } catch (const addcomb::exactness_error& ex) {
        std::cerr << "exactness error: " << ex.what() << "\n";
        return 3;
    } catch (const addcomb::validation_error& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
