#include "gsat/verify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "gsat/chase.hpp"
#include "gsat/dsaturate.hpp"
#include "gsat/eval.hpp"
#include "gsat/normal_forms.hpp"
#include "gsat/random_program.hpp"
#include "gsat/saturate.hpp"

namespace gsat {

void verify_report::merge(const verify_report& other) {
    checks += other.checks;
    failures += other.failures;
    shape_violations += other.shape_violations;
    ceiling_hits += other.ceiling_hits;
    failure_lines.insert(failure_lines.end(), other.failure_lines.begin(),
                         other.failure_lines.end());
}

namespace {

// Freeze the body variables of a full rule as fresh constants: the body
// becomes a database and the head facts are what must be derivable.
struct frozen_rule {
    instance db;
    std::vector<std::vector<fact>> head_disjuncts;  // one vector per conjunct
};

frozen_rule freeze(const rule& r) {
    std::map<std::string, std::string> names;
    for (const std::string& v : body_vars(r))
        names.emplace(v, "k" + std::to_string(names.size() + 1));
    auto ground = [&](const atom& a) {
        fact f;
        f.pred = a.pred;
        for (const term& t : a.args)
            f.args.push_back(t.is_const() ? t : term::cst(names.at(t.name)));
        return f;
    };
    frozen_rule out;
    for (const atom& a : r.body) out.db.insert(ground(a));
    for (const head_conjunct& c : r.head) {
        std::vector<fact> fs;
        for (const atom& a : c.atoms) fs.push_back(ground(a));
        out.head_disjuncts.push_back(std::move(fs));
    }
    return out;
}

rule unsound_probe(const program& p) {
    // Negative control: guard of the first rule implies the alphabetically
    // first predicate applied to the guard's first variable.
    if (p.rules.empty()) throw std::invalid_argument("--inject-unsound needs at least one rule");
    guard_info gi = is_guarded(p.rules.front());
    if (gi.guards.empty() || vars_of(gi.guards.front()).empty())
        throw std::invalid_argument("--inject-unsound needs a guarded rule with variables");
    atom guard = gi.guards.front();
    std::set<std::string> preds;
    std::map<std::string, std::size_t> arity;
    for (const rule& r : p.rules) {
        for (const atom& a : r.body) {
            preds.insert(a.pred);
            arity[a.pred] = a.args.size();
        }
        for (const head_conjunct& c : r.head)
            for (const atom& a : c.atoms) {
                preds.insert(a.pred);
                arity[a.pred] = a.args.size();
            }
    }
    std::string target = *preds.begin();
    std::string v = *vars_of(guard).begin();
    atom head;
    head.pred = target;
    for (std::size_t i = 0; i < arity[target]; ++i) head.args.push_back(term::var(v));
    return vnf(make_rule({guard}, {{{}, {head}}}));
}

}  // namespace

verify_report verify_gtgd_program(const program& p, const verify_options& opts) {
    verify_report rep;
    saturation_result gs = gsat(p.rules);
    rep.shape_violations += gs.stats.shape_violations;
    rep.ceiling_hits += gs.stats.size_ceiling_hits;

    saturation_result ss;
    if (opts.check_ssat) {
        ss = ssat(p.rules);
        rep.shape_violations += ss.stats.shape_violations;
        rep.ceiling_hits += ss.stats.size_ceiling_hits;
    }

    std::vector<rule> gsat_rules = gs.rules;
    std::vector<rule> ssat_rules = ss.rules;
    if (opts.inject_unsound) {
        rule probe = unsound_probe(p);
        gsat_rules.push_back(probe);
        ssat_rules.push_back(probe);
    }

    // Per-rule soundness by frozen-body chase over the original rules.
    auto check_sound = [&](const std::vector<rule>& derived, const char* label) {
        for (const rule& r : derived) {
            ++rep.checks;
            frozen_rule fr = freeze(r);
            chase_run run = chase(fr.db, p.rules, chase_mode::restricted, opts.chase_budget);
            bool ok = true;
            for (const fact& f : fr.head_disjuncts[0])
                if (!run.final_instance.count(f)) ok = false;
            if (!ok) {
                ++rep.failures;
                rep.failure_lines.push_back(std::string("soundness[") + label +
                                            "]: unverifiable rule " + print_rule(r));
            }
        }
    };
    check_sound(gsat_rules, "gsat");
    if (opts.check_ssat) check_sound(ssat_rules, "ssat");

    // Bounded completeness: everything the bounded chase proves must come
    // out of the rewriting + Datalog evaluation.
    chase_run base = chase(p.database, p.rules, chase_mode::restricted, opts.chase_budget);
    datalog_result gfix = datalog_eval(p.database, gsat_rules);
    datalog_result sfix;
    if (opts.check_ssat) sfix = datalog_eval(p.database, ssat_rules);
    for (const query& q : atomic_queries(p)) {
        const fact& f = q.disjuncts[0][0];
        if (!base.final_instance.count(f)) continue;  // not proved within bound
        ++rep.checks;
        if (!gfix.facts.count(f)) {
            ++rep.failures;
            rep.failure_lines.push_back("completeness[gsat]: chase proves " + print_atom(f) +
                                        " but the rewriting does not");
        }
        if (opts.check_ssat) {
            ++rep.checks;
            if (!sfix.facts.count(f)) {
                ++rep.failures;
                rep.failure_lines.push_back("completeness[ssat]: chase proves " + print_atom(f) +
                                            " but the rewriting does not");
            }
        }
    }

    // SSat and GSat answer agreement on the program database.
    if (opts.check_ssat) {
        ++rep.checks;
        if (gfix.facts != sfix.facts) {
            ++rep.failures;
            rep.failure_lines.push_back("agreement: ssat and gsat fixpoints differ");
        }
    }
    return rep;
}

verify_report verify_disgtgd_program(const program& p, const verify_options& opts) {
    verify_report rep;
    dgsat_result dg = dgsat(p.rules);
    rep.shape_violations += dg.stats.shape_violations;
    rep.ceiling_hits += dg.stats.size_ceiling_hits;

    std::vector<rule> rewriting = dg.rules;
    if (opts.inject_unsound) rewriting.push_back(unsound_probe(p));

    std::vector<rule> shnf_rules = shnf(p.rules).rules;

    // Per-rule soundness: the frozen head disjunction must hold in every
    // leaf of some chase tree over SHNF(Sigma), which defines the fresh
    // conjunct predicates the derived rules may mention.
    for (const rule& r : rewriting) {
        ++rep.checks;
        frozen_rule fr = freeze(r);
        query q;
        for (const auto& disjunct : fr.head_disjuncts) q.disjuncts.push_back(disjunct);
        disjunctive_answer ans = disjunctive_chase(fr.db, shnf_rules, q, opts.node_budget);
        if (ans.result != tree_result::proven) {
            ++rep.failures;
            rep.failure_lines.push_back("soundness[dgsat]: unverifiable rule " + print_rule(r));
        }
    }

    // Bounded completeness over ground atomic queries on original predicates.
    std::set<std::string> fresh(dg.fresh_predicates.begin(), dg.fresh_predicates.end());
    for (const query& q : atomic_queries(p)) {
        const fact& f = q.disjuncts[0][0];
        if (fresh.count(f.pred)) continue;
        disjunctive_answer ans = disjunctive_chase(p.database, p.rules, q, opts.node_budget);
        if (ans.result != tree_result::proven) continue;
        ++rep.checks;
        if (!disdatalog_entails(p.database, rewriting, q)) {
            ++rep.failures;
            rep.failure_lines.push_back("completeness[dgsat]: chase proves " + print_atom(f) +
                                        " but the rewriting does not entail it");
        }
    }
    return rep;
}

verify_report verify_program(const program& p, const verify_options& opts) {
    bool disjunctive = std::any_of(p.rules.begin(), p.rules.end(),
                                   [](const rule& r) { return r.head.size() > 1; });
    return disjunctive ? verify_disgtgd_program(p, opts) : verify_gtgd_program(p, opts);
}

verify_report verify_random_suite(const std::string& rule_class, std::uint32_t count,
                                  std::uint64_t seed, const verify_options& opts) {
    verify_report rep;
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t s = seed * 1000003ULL + i;
        program p = rule_class == "disgtgd" ? random_disgtgd_program(s)
                                            : random_gtgd_program(s);
        verify_report r = rule_class == "disgtgd" ? verify_disgtgd_program(p, opts)
                                                  : verify_gtgd_program(p, opts);
        rep.merge(r);
    }
    return rep;
}

bool worlds_entail(const instance& db, const std::vector<rule>& rules, const query& q) {
    // Ground-atom universe over the database constants.
    std::map<std::string, std::size_t> preds;
    for (const rule& r : rules) {
        for (const atom& a : r.body) preds.emplace(a.pred, a.args.size());
        for (const head_conjunct& c : r.head)
            for (const atom& a : c.atoms) preds.emplace(a.pred, a.args.size());
    }
    for (const fact& f : db) preds.emplace(f.pred, f.args.size());
    std::vector<std::string> consts;
    {
        std::set<std::string> cs = consts_of(db);
        consts.assign(cs.begin(), cs.end());
    }

    std::vector<fact> universe;
    for (const auto& [pred, arity] : preds) {
        if (arity > 0 && consts.empty()) continue;
        std::vector<std::size_t> odo(arity, 0);
        for (;;) {
            fact f;
            f.pred = pred;
            for (std::size_t i = 0; i < arity; ++i) f.args.push_back(term::cst(consts[odo[i]]));
            universe.push_back(f);
            std::size_t i = 0;
            for (; i < arity; ++i) {
                if (++odo[i] < consts.size()) break;
                odo[i] = 0;
            }
            if (i == arity) break;
        }
    }
    if (universe.size() > 22)
        throw std::invalid_argument("worlds_entail: ground-atom universe too large");

    // Only atoms outside the database vary.
    std::vector<fact> free_atoms;
    for (const fact& f : universe)
        if (!db.count(f)) free_atoms.push_back(f);

    std::uint64_t worlds = 1ULL << free_atoms.size();
    for (std::uint64_t w = 0; w < worlds; ++w) {
        instance world = db;
        for (std::size_t i = 0; i < free_atoms.size(); ++i)
            if (w & (1ULL << i)) world.insert(free_atoms[i]);

        bool model = true;
        for (const rule& r : rules) {
            if (!model) break;
            // every trigger must satisfy some head disjunct
            std::vector<std::string> vars;
            {
                std::set<std::string> vs = body_vars(r);
                vars.assign(vs.begin(), vs.end());
            }
            if (!vars.empty() && consts.empty()) continue;
            std::vector<std::size_t> odo(vars.size(), 0);
            for (;;) {
                std::map<std::string, std::string> b;
                for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = consts[odo[i]];
                auto ground = [&](const atom& a) {
                    fact f;
                    f.pred = a.pred;
                    for (const term& t : a.args)
                        f.args.push_back(t.is_const() ? t : term::cst(b.at(t.name)));
                    return f;
                };
                bool body_holds = true;
                for (const atom& a : r.body)
                    if (!world.count(ground(a))) {
                        body_holds = false;
                        break;
                    }
                if (body_holds) {
                    bool head_holds = false;
                    for (const head_conjunct& c : r.head) {
                        bool all = true;
                        for (const atom& a : c.atoms)
                            if (!world.count(ground(a))) {
                                all = false;
                                break;
                            }
                        if (all) {
                            head_holds = true;
                            break;
                        }
                    }
                    if (!head_holds) {
                        model = false;
                        break;
                    }
                }
                std::size_t i = 0;
                for (; i < vars.size(); ++i) {
                    if (++odo[i] < consts.size()) break;
                    odo[i] = 0;
                }
                if (i == vars.size()) break;
            }
        }
        if (model && !answer_ucq(world, q)) return false;
    }
    return true;
}

}  // namespace gsat
