#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfvs/driver.hpp"
#include "dfvs/oracle.hpp"
#include "dfvs/pace_io.hpp"
#include "dfvs/reductions.hpp"

namespace {

using nlohmann::json;

dfvs::DiGraph load_graph(const std::string& path) {
    if (path == "-") return dfvs::parse_graph(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return dfvs::parse_graph(in);
}

std::uint32_t parse_rules(const std::string& spec) {
    if (spec.empty()) return dfvs::kDefaultRules;
    if (spec.find_first_not_of("0123456789") == std::string::npos)
        return (std::uint32_t)std::stoul(spec);
    std::uint32_t mask = 0;
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto r = dfvs::rule_from_name(name);
        if (!r) throw CLI::ValidationError("--rules", "unknown rule '" + name + "'");
        mask |= dfvs::rule_bit(*r);
    }
    return mask;
}

json rules_json(const dfvs::ReductionStats& stats) {
    json out = json::object();
    for (int i = 0; i < dfvs::kNumRules; ++i) {
        const auto& s = stats.per_rule[i];
        if (s.fires == 0) continue;
        out[std::string(dfvs::rule_name((dfvs::RuleId)i))] = {
            {"fires", s.fires},
            {"vertices_removed", s.vertices_removed},
            {"arcs_removed", s.arcs_removed},
        };
    }
    return out;
}

void write_stats(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    out << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact directed feedback vertex set solver"};
    app.require_subcommand(1);

    std::string graph_path = "-", stats_path, mode = "propagate", rules_spec;
    std::string solution_path;
    bool no_reductions = false;
    int max_cycle_len = 4;
    long max_cycles = 25000;
    unsigned seed = 0;

    CLI::App* solve = app.add_subcommand("solve", "solve an instance to optimality");
    solve->add_option("graph", graph_path, "input graph file, '-' for stdin");
    solve->add_option("--mode", mode, "propagate|cegar")
        ->check(CLI::IsMember({"propagate", "cegar"}));
    solve->add_flag("--no-reductions", no_reductions, "skip all reductions");
    solve->add_option("--max-cycle-len", max_cycle_len, "initial cycle length bound");
    solve->add_option("--max-cycles", max_cycles, "initial cycle cap (0 = none)");
    solve->add_option("--rules", rules_spec, "rule mask (number or comma-separated names)");
    solve->add_option("--seed", seed, "random seed (runs are deterministic)");
    solve->add_option("--stats", stats_path, "write a JSON stats line to this file");

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "apply reductions, print the kernel");
    reduce_cmd->add_option("graph", graph_path, "input graph file, '-' for stdin");
    reduce_cmd->add_option("--rules", rules_spec, "rule mask (number or names)");
    reduce_cmd->add_option("--stats", stats_path, "write a JSON stats line to this file");

    CLI::App* verify = app.add_subcommand("verify", "check a solution file");
    verify->add_option("graph", graph_path, "input graph file")->required();
    verify->add_option("solution", solution_path, "solution file, one id per line")->required();

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum (small inputs)");
    oracle_cmd->add_option("graph", graph_path, "input graph file, '-' for stdin");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            dfvs::DiGraph g = load_graph(graph_path);
            dfvs::SolveConfig cfg;
            cfg.mode = mode == "cegar" ? dfvs::SolveConfig::Mode::Cegar
                                       : dfvs::SolveConfig::Mode::Propagate;
            cfg.reductions = !no_reductions;
            cfg.max_cycle_len = max_cycle_len;
            cfg.max_cycles = max_cycles;
            cfg.rules = parse_rules(rules_spec);
            cfg.seed = seed;
            dfvs::SolveReport rep = dfvs::solve_dfvs(g, cfg);
            dfvs::write_solution(std::cout, rep.solution);
            write_stats(stats_path,
                        json{{"n", g.num_vertices()},
                             {"m", g.arc_count()},
                             {"optimum", rep.optimum},
                             {"mode", mode},
                             {"kernel_vertices", rep.kernel_vertices},
                             {"kernel_arcs", rep.kernel_arcs},
                             {"initial_cycles", rep.initial_cycles},
                             {"cycles_complete", rep.cycles_complete},
                             {"cegar_iterations", rep.cegar_iterations},
                             {"propagator_injections", rep.propagator_injections},
                             {"reduce_seconds", rep.reduce_seconds},
                             {"enumerate_seconds", rep.enumerate_seconds},
                             {"solve_seconds", rep.solve_seconds},
                             {"sat",
                              {{"decisions", rep.sat_stats.decisions},
                               {"propagations", rep.sat_stats.propagations},
                               {"conflicts", rep.sat_stats.conflicts},
                               {"restarts", rep.sat_stats.restarts},
                               {"learned", rep.sat_stats.learned},
                               {"injected", rep.sat_stats.injected}}},
                             {"rules", rules_json(rep.reduction_stats)}});
            return 0;
        }
        if (reduce_cmd->parsed()) {
            dfvs::DiGraph g = load_graph(graph_path);
            dfvs::ReductionStats stats;
            dfvs::ReduceResult r = dfvs::reduce(g, parse_rules(rules_spec), &stats);
            dfvs::write_graph(std::cout, r.kernel);
            write_stats(stats_path, json{{"n", g.num_vertices()},
                                         {"m", g.arc_count()},
                                         {"kernel_vertices", r.kernel.num_vertices()},
                                         {"kernel_arcs", r.kernel.arc_count()},
                                         {"forced", r.trace.forced.size()},
                                         {"offset", r.trace.offset},
                                         {"rules", rules_json(stats)}});
            return 0;
        }
        if (verify->parsed()) {
            dfvs::DiGraph g = load_graph(graph_path);
            std::ifstream in(solution_path);
            if (!in) throw std::runtime_error("cannot open " + solution_path);
            std::vector<dfvs::VertexId> sol = dfvs::parse_solution(in);
            if (!dfvs::validate(g, sol)) {
                std::cerr << "INVALID: removal leaves a cycle\n";
                return 1;
            }
            std::cout << "OK size=" << sol.size() << '\n';
            return 0;
        }
        if (oracle_cmd->parsed()) {
            dfvs::DiGraph g = load_graph(graph_path);
            std::vector<dfvs::VertexId> sol = dfvs::oracle::brute_force_dfvs(g);
            dfvs::write_solution(std::cout, sol);
            return 0;
        }
    } catch (const dfvs::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
