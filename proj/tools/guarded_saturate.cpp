// guarded-saturate: rewrite guarded (disjunctive) TGD programs into full
// Datalog / disjunctive Datalog, answer quantifier-free queries, run the
// chase oracle, and cross-verify rewritings against it.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsat/chase.hpp"
#include "gsat/dsaturate.hpp"
#include "gsat/eval.hpp"
#include "gsat/normal_forms.hpp"
#include "gsat/saturate.hpp"
#include "gsat/textio.hpp"
#include "gsat/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_parse = 2;
constexpr int exit_unguarded = 3;
constexpr int exit_wrong_algo = 4;
constexpr int exit_existential_query = 5;

struct cli_config {
    std::string command;
    std::string input_path;
    std::string algo = "gsat";
    std::string format = "text";
    std::string emit;         // dot | json
    std::string out_path;
    std::string mode = "restricted";
    std::string form = "vnf";
    std::string rule_class = "gtgd";
    int budget = 10000;
    int nodes = 5000;
    int random_count = 0;
    unsigned long long seed = 1;
    int jobs = 1;
    bool allow_skolem = false;
    bool subsume = false;
    bool inject_unsound = false;
    bool one_pass = false;
};

bool color_enabled() {
    const char* env = std::getenv("GS_COLOR");
    if (env && std::string(env) == "0") return false;
    return isatty(fileno(stdout));
}

std::string paint(const std::string& s, const char* code) {
    if (!color_enabled()) return s;
    return std::string("\033[") + code + "m" + s + "\033[0m";
}

gsat::program load_program(const cli_config& cfg) {
    std::ifstream in(cfg.input_path);
    if (!in) throw std::runtime_error("cannot open " + cfg.input_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return gsat::parse_program(buf.str(), {.allow_skolem = cfg.allow_skolem});
}

bool has_disjunctive(const gsat::program& p) {
    for (const gsat::rule& r : p.rules)
        if (r.head.size() > 1) return true;
    return false;
}

void write_output(const cli_config& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    out << text;
}

int cmd_saturate(const cli_config& cfg) {
    gsat::program p = load_program(cfg);
    if (has_disjunctive(p) && cfg.algo != "dgsat") {
        std::cerr << "error: disjunctive rules require --algo dgsat\n";
        return exit_wrong_algo;
    }

    auto start = std::chrono::steady_clock::now();
    std::vector<gsat::rule> rewriting;
    gsat::saturation_stats stats;
    gsat::saturation_options opts;
    opts.subsume = cfg.subsume;
    if (cfg.algo == "ssat") {
        gsat::saturation_result r = gsat::ssat(p.rules, opts);
        rewriting = r.rules;
        stats = r.stats;
    } else if (cfg.algo == "gsat") {
        gsat::saturation_result r = gsat::gsat(p.rules, opts);
        rewriting = r.rules;
        stats = r.stats;
    } else if (cfg.algo == "dgsat") {
        gsat::dgsat_result r = gsat::dgsat(p.rules, opts);
        rewriting = r.rules;
        stats = r.stats;
    } else {
        std::cerr << "error: unknown algorithm " << cfg.algo << "\n";
        return exit_wrong_algo;
    }
    auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

    std::string out;
    for (const gsat::rule& r : rewriting) out += gsat::print_rule(r) + "\n";
    if (cfg.format == "json") {
        nlohmann::json j;
        j["rules"] = nlohmann::json::array();
        for (const gsat::rule& r : rewriting) j["rules"].push_back(gsat::print_rule(r));
        j["stats"] = {{"rules", rewriting.size()},
                      {"closure", stats.closure_size},
                      {"pairs", stats.pairs_processed},
                      {"inferences", stats.inferences},
                      {"shape_violations", stats.shape_violations}};
        out = j.dump(2) + "\n";
    } else {
        out += "% rules: " + std::to_string(rewriting.size()) +
               ", closure: " + std::to_string(stats.closure_size) +
               ", pairs: " + std::to_string(stats.pairs_processed) +
               ", inferences: " + std::to_string(stats.inferences) + "\n";
    }
    write_output(cfg, out);
    std::cerr << "wall time: " << wall.count() << " ms\n";
    return exit_ok;
}

int cmd_answer(const cli_config& cfg) {
    gsat::program p = load_program(cfg);
    for (const gsat::query& q : p.queries) {
        if (!gsat::is_ground_query(q)) {
            std::cerr << "error: query with variables; use 'guarded-saturate chase' for "
                         "existential queries\n";
            return exit_existential_query;
        }
    }
    bool disjunctive = has_disjunctive(p);
    std::string algo = cfg.algo;
    if (disjunctive && algo != "dgsat") algo = "dgsat";

    std::string out;
    if (algo == "dgsat") {
        gsat::dgsat_result r = gsat::dgsat(p.rules);
        std::set<std::string> fresh(r.fresh_predicates.begin(), r.fresh_predicates.end());
        for (const gsat::query& q : p.queries)
            for (const auto& d : q.disjuncts)
                for (const gsat::atom& a : d)
                    if (fresh.count(a.pred)) {
                        std::cerr << "error: query uses a reserved conjunct predicate " << a.pred
                                  << "\n";
                        return exit_wrong_algo;
                    }
        for (std::size_t i = 0; i < p.queries.size(); ++i) {
            bool yes = gsat::disdatalog_entails(p.database, r.rules, p.queries[i]);
            out += "Q" + std::to_string(i + 1) + ": " + (yes ? "yes" : "no") + "\n";
        }
    } else {
        std::vector<gsat::rule> rewriting = algo == "ssat" ? gsat::ssat(p.rules).rules
                                                           : gsat::gsat(p.rules).rules;
        gsat::datalog_result fix = gsat::datalog_eval(p.database, rewriting);
        for (std::size_t i = 0; i < p.queries.size(); ++i) {
            bool yes = gsat::answer_ucq(fix.facts, p.queries[i]);
            out += "Q" + std::to_string(i + 1) + ": " + (yes ? "yes" : "no") + "\n";
        }
    }
    write_output(cfg, out);
    return exit_ok;
}

int cmd_chase(const cli_config& cfg) {
    gsat::program p = load_program(cfg);
    bool disjunctive = has_disjunctive(p);
    std::string out;
    std::string trace;

    for (std::size_t i = 0; i < p.queries.size(); ++i) {
        const gsat::query& q = p.queries[i];
        std::string line = "Q" + std::to_string(i + 1) + ": ";
        if (disjunctive) {
            gsat::disjunctive_answer ans =
                gsat::disjunctive_chase(p.database, p.rules, q, cfg.nodes);
            switch (ans.result) {
                case gsat::tree_result::proven:
                    line += "yes (" + std::to_string(ans.tree.nodes.size()) + " nodes)";
                    break;
                case gsat::tree_result::unknown_at_fixpoint:
                    line += "no (fixpoint)";
                    break;
                case gsat::tree_result::unknown:
                    line += "unknown (node budget exhausted)";
                    break;
            }
            if (cfg.emit == "json") trace = gsat::tree_to_json(ans.tree);
            if (cfg.emit == "dot") trace = gsat::tree_to_dot(ans.tree);
        } else {
            gsat::chase_mode mode = cfg.mode == "oblivious" ? gsat::chase_mode::oblivious
                                                            : gsat::chase_mode::restricted;
            gsat::chase_answer ans = gsat::chase_certain(p.database, p.rules, q, cfg.budget, mode);
            switch (ans.result) {
                case gsat::certainty::yes:
                    line += "yes (" + std::to_string(ans.steps_used) + " steps)";
                    break;
                case gsat::certainty::refuted_at_fixpoint:
                    line += "no (fixpoint)";
                    break;
                case gsat::certainty::unknown:
                    line += "unknown (step budget exhausted)";
                    break;
            }
            if (cfg.one_pass && ans.run.has_provenance) {
                gsat::one_pass_report rep = gsat::check_one_pass(ans.run);
                line += rep.one_pass ? "; one-pass: true" : "; one-pass: false";
                if (rep.violation)
                    line += " (node " + std::to_string(rep.violation->node) + ", steps " +
                            std::to_string(rep.violation->departing_step) + "/" +
                            std::to_string(rep.violation->modifying_step) + ")";
            }
            if (cfg.emit == "json") trace = gsat::run_to_json(ans.run);
            if (cfg.emit == "dot") trace = gsat::run_to_dot(ans.run);
        }
        out += line + "\n";
    }
    if (p.queries.empty()) {
        // No queries: run the chase to quiescence and report the instance.
        if (!disjunctive) {
            gsat::chase_run run =
                gsat::chase(p.database, p.rules,
                            cfg.mode == "oblivious" ? gsat::chase_mode::oblivious
                                                    : gsat::chase_mode::restricted,
                            cfg.budget);
            for (const gsat::fact& f : run.final_instance) out += gsat::print_fact(f) + "\n";
            if (cfg.one_pass && run.has_provenance) {
                gsat::one_pass_report rep = gsat::check_one_pass(run);
                out += rep.one_pass ? "one-pass: true\n" : "one-pass: false\n";
            }
            if (cfg.emit == "json") trace = gsat::run_to_json(run);
            if (cfg.emit == "dot") trace = gsat::run_to_dot(run);
        }
    }
    std::cout << out;
    if (!cfg.emit.empty()) {
        if (cfg.out_path.empty()) throw std::runtime_error("--emit requires --out FILE");
        std::ofstream tf(cfg.out_path);
        tf << trace;
    }
    return exit_ok;
}

int cmd_normalize(const cli_config& cfg) {
    gsat::program p = load_program(cfg);
    std::vector<gsat::rule> rules = p.rules;
    if (cfg.form == "vnf") {
        rules = gsat::vnf(rules);
    } else if (cfg.form == "hnf") {
        rules = gsat::vnf(gsat::hnf(rules));
    } else if (cfg.form == "shnf") {
        rules = gsat::shnf(rules).rules;
    } else if (cfg.form == "skolem") {
        rules = gsat::vnf(gsat::skolemize(gsat::shnf(rules).rules).rules);
    } else if (cfg.form == "ifc") {
        std::vector<gsat::rule> kept;
        for (const gsat::rule& r : rules)
            if (auto f = gsat::ifc(r)) kept.push_back(*f);
        rules = kept;
    } else {
        std::cerr << "error: unknown --form " << cfg.form << "\n";
        return exit_wrong_algo;
    }
    std::string out;
    for (const gsat::fact& f : p.database) out += gsat::print_fact(f) + "\n";
    for (const gsat::rule& r : rules) out += gsat::print_rule(r) + "\n";
    for (const gsat::query& q : p.queries) out += gsat::print_query(q) + "\n";
    write_output(cfg, out);
    return exit_ok;
}

int cmd_verify(const cli_config& cfg) {
    gsat::verify_options opts;
    opts.chase_budget = cfg.budget;
    opts.node_budget = cfg.nodes;
    opts.inject_unsound = cfg.inject_unsound;

    gsat::verify_report rep;
    std::string out;
    if (cfg.random_count > 0) {
        out += "% random suite: count=" + std::to_string(cfg.random_count) +
               " seed=" + std::to_string(cfg.seed) + " class=" + cfg.rule_class +
               " limits: predicates<=3 arity<=3 rules<=" +
               (cfg.rule_class == "disgtgd" ? std::string("3") : std::string("4")) +
               " width<=3 facts<=4\n";
        rep = gsat::verify_random_suite(cfg.rule_class, cfg.random_count, cfg.seed, opts);
    } else {
        gsat::program p = load_program(cfg);
        rep = gsat::verify_program(p, opts);
    }

    out += "checks: " + std::to_string(rep.checks) + "\n";
    out += "failures: " + std::to_string(rep.failures) + "\n";
    out += "shape violations: " + std::to_string(rep.shape_violations) + "\n";
    for (const std::string& line : rep.failure_lines) out += "  " + line + "\n";
    out += rep.ok() ? paint("PASS", "32") + "\n" : paint("FAIL", "31") + "\n";
    write_output(cfg, out);
    return rep.ok() ? exit_ok : exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rewrites guarded (disjunctive) TGDs into full Datalog programs, answers "
                 "quantifier-free queries, and cross-checks against a bounded chase oracle"};
    app.require_subcommand(1);

    cli_config cfg;

    auto add_common = [&](CLI::App* sub, bool needs_file) {
        if (needs_file)
            sub->add_option("file", cfg.input_path, "input program (.gtgd)")->required();
        sub->add_flag("--allow-skolem", cfg.allow_skolem,
                      "accept function terms in input rules");
        sub->add_option("--jobs", cfg.jobs, "reserved; evaluation is single-threaded")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* sat = app.add_subcommand("saturate", "print the atomic rewriting");
    add_common(sat, true);
    sat->add_option("--algo", cfg.algo, "ssat | gsat | dgsat");
    sat->add_option("--format", cfg.format, "text | json");
    sat->add_option("--out", cfg.out_path, "write output to a file");
    sat->add_flag("--subsume", cfg.subsume, "experimental subsumption-based deletion");

    CLI::App* ans = app.add_subcommand("answer", "answer the program's queries");
    add_common(ans, true);
    ans->add_option("--algo", cfg.algo, "ssat | gsat | dgsat");
    ans->add_option("--out", cfg.out_path, "write output to a file");

    CLI::App* ch = app.add_subcommand("chase", "run the chase oracle on the queries");
    add_common(ch, true);
    ch->add_option("--budget", cfg.budget, "chase step budget")->check(CLI::PositiveNumber);
    ch->add_option("--nodes", cfg.nodes, "chase tree node budget")->check(CLI::PositiveNumber);
    ch->add_option("--mode", cfg.mode, "restricted | oblivious");
    ch->add_option("--emit", cfg.emit, "dot | json trace export");
    ch->add_option("--out", cfg.out_path, "trace output file");
    ch->add_flag("--one-pass", cfg.one_pass, "check the recorded run for the one-pass property");

    CLI::App* norm = app.add_subcommand("normalize", "print a normal form of the rules");
    add_common(norm, true);
    norm->add_option("--form", cfg.form, "vnf | hnf | shnf | skolem | ifc");
    norm->add_option("--out", cfg.out_path, "write output to a file");

    CLI::App* ver = app.add_subcommand("verify", "cross-check rewritings against the oracle");
    add_common(ver, false);
    ver->add_option("file", cfg.input_path, "input program (.gtgd)");
    ver->add_option("--random", cfg.random_count, "verify N random programs instead of a file");
    ver->add_option("--seed", cfg.seed, "random suite seed");
    ver->add_option("--class", cfg.rule_class, "gtgd | disgtgd");
    ver->add_option("--budget", cfg.budget, "chase step budget")->check(CLI::PositiveNumber);
    ver->add_option("--nodes", cfg.nodes, "chase tree node budget")->check(CLI::PositiveNumber);
    ver->add_flag("--inject-unsound", cfg.inject_unsound, "negative control");
    ver->add_option("--out", cfg.out_path, "write output to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sat->parsed()) return cmd_saturate(cfg);
        if (ans->parsed()) return cmd_answer(cfg);
        if (ch->parsed()) return cmd_chase(cfg);
        if (norm->parsed()) return cmd_normalize(cfg);
        if (ver->parsed()) {
            if (cfg.random_count == 0 && cfg.input_path.empty()) {
                std::cerr << "error: verify needs a file or --random N\n";
                return exit_wrong_algo;
            }
            return cmd_verify(cfg);
        }
    } catch (const gsat::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const gsat::unguarded_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_unguarded;
    } catch (const gsat::rule_class_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_wrong_algo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    }
    return exit_ok;
}
