#include "gsat/eval.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace gsat {

namespace {

struct eval_index {
    std::map<std::string, std::vector<fact>> by_pred;
    void add(const fact& f) { by_pred[f.pred].push_back(f); }
};

fact ground_atom(const atom& a, const std::map<std::string, std::string>& b) {
    fact f;
    f.pred = a.pred;
    for (const term& t : a.args)
        f.args.push_back(t.is_const() ? t : term::cst(b.at(t.name)));
    return f;
}

void match_all(const std::vector<atom>& atoms, std::size_t i, const eval_index& idx,
               std::map<std::string, std::string>& b, std::uint64_t& work,
               const std::function<void(const std::map<std::string, std::string>&)>& emit) {
    if (i == atoms.size()) {
        emit(b);
        return;
    }
    auto it = idx.by_pred.find(atoms[i].pred);
    if (it == idx.by_pred.end()) return;
    for (const fact& f : it->second) {
        ++work;
        if (f.args.size() != atoms[i].args.size()) continue;
        std::vector<std::string> bound;
        bool ok = true;
        for (std::size_t k = 0; k < f.args.size(); ++k) {
            const term& pt = atoms[i].args[k];
            if (pt.is_const()) {
                if (pt.name != f.args[k].name) { ok = false; break; }
                continue;
            }
            auto bit = b.find(pt.name);
            if (bit == b.end()) {
                b.emplace(pt.name, f.args[k].name);
                bound.push_back(pt.name);
            } else if (bit->second != f.args[k].name) {
                ok = false;
                break;
            }
        }
        if (ok) match_all(atoms, i + 1, idx, b, work, emit);
        for (const std::string& v : bound) b.erase(v);
    }
}

}  // namespace

datalog_result datalog_eval(const instance& db, const std::vector<rule>& rules) {
    for (const rule& r : rules) {
        if (r.head.size() != 1 || !r.head[0].existentials.empty())
            throw std::invalid_argument("datalog_eval requires full TGDs: " + print_rule(r));
        if (!is_function_free(r.body) || !is_function_free(r.head[0].atoms))
            throw std::invalid_argument("datalog_eval requires function-free rules: " +
                                        print_rule(r));
    }

    datalog_result res;
    res.facts = db;
    eval_index idx;
    for (const fact& f : res.facts) idx.add(f);

    bool changed = true;
    while (changed) {
        changed = false;
        for (const rule& r : rules) {
            std::vector<fact> derived;
            std::map<std::string, std::string> b;
            match_all(r.body, 0, idx, b, res.work_units,
                      [&](const std::map<std::string, std::string>& full) {
                          for (const atom& h : r.head[0].atoms) {
                              fact f = ground_atom(h, full);
                              if (!res.facts.count(f)) derived.push_back(f);
                          }
                          ++res.firings;
                      });
            for (fact& f : derived) {
                if (res.facts.insert(f).second) {
                    idx.add(f);
                    changed = true;
                }
            }
        }
    }
    return res;
}

bool answer_ucq(const instance& I, const query& q) {
    if (!is_ground_query(q))
        throw std::invalid_argument("answer_ucq: query is not ground; use the chase oracle");
    for (const auto& disjunct : q.disjuncts) {
        bool all = true;
        for (const atom& a : disjunct)
            if (!I.count(a)) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

// --- propositional core --------------------------------------------------------

namespace {

// A clause is a sorted set of literals; positive literal = atom id + 1,
// negative literal = -(atom id + 1).
using clause = std::vector<int>;

bool is_tautology(const clause& c) {
    for (int lit : c)
        if (lit < 0 && std::binary_search(c.begin(), c.end(), -lit)) return true;
    return false;
}

bool subsumes(const clause& a, const clause& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

clause normalize(clause c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

// Resolution closure with forward subsumption; true iff the empty clause
// is derivable (the set is unsatisfiable).
bool resolution_unsat(std::vector<clause> clauses) {
    std::set<clause> kept;
    std::vector<clause> worklist;
    auto add = [&](clause c) {
        c = normalize(std::move(c));
        if (c.empty()) return true;
        if (is_tautology(c)) return false;
        for (const clause& k : kept)
            if (subsumes(k, c)) return false;
        std::erase_if(worklist, [&](const clause& w) { return subsumes(c, w); });
        for (auto it = kept.begin(); it != kept.end();)
            it = subsumes(c, *it) ? kept.erase(it) : std::next(it);
        kept.insert(c);
        worklist.push_back(std::move(c));
        return false;
    };
    for (clause& c : clauses)
        if (add(std::move(c))) return true;

    while (!worklist.empty()) {
        clause c = worklist.back();
        worklist.pop_back();
        if (!kept.count(c)) continue;  // deleted by later subsumption
        std::vector<clause> partners(kept.begin(), kept.end());
        for (const clause& d : partners) {
            for (int lit : c) {
                if (!std::binary_search(d.begin(), d.end(), -lit)) continue;
                clause resolvent;
                for (int l : c)
                    if (l != lit) resolvent.push_back(l);
                for (int l : d)
                    if (l != -lit) resolvent.push_back(l);
                if (add(std::move(resolvent))) return true;
            }
        }
    }
    return false;
}

struct atom_ids {
    std::map<fact, int> ids;
    int id(const fact& f) {
        auto [it, inserted] = ids.emplace(f, static_cast<int>(ids.size()));
        return it->second;
    }
};

void ground_rule_clauses(const rule& r, const std::vector<std::string>& consts, atom_ids& ids,
                         std::vector<clause>& out) {
    std::vector<std::string> vars;
    {
        std::set<std::string> vs = body_vars(r);
        vars.assign(vs.begin(), vs.end());
    }
    std::vector<std::size_t> odo(vars.size(), 0);
    if (consts.empty() && !vars.empty()) return;
    for (;;) {
        std::map<std::string, std::string> b;
        for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = consts[odo[i]];
        clause c;
        for (const atom& a : r.body) c.push_back(-(ids.id(ground_atom(a, b)) + 1));
        for (const head_conjunct& hc : r.head)
            c.push_back(ids.id(ground_atom(hc.atoms[0], b)) + 1);
        out.push_back(normalize(std::move(c)));

        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++odo[i] < consts.size()) break;
            odo[i] = 0;
        }
        if (i == vars.size()) break;
    }
}

}  // namespace

bool disdatalog_entails(const instance& db, const std::vector<rule>& rules, const query& q) {
    if (!is_ground_query(q)) throw std::invalid_argument("disdatalog_entails: query is not ground");

    std::vector<rule> clausal;
    for (const rule& r : rules) {
        if (!is_full(r)) throw std::invalid_argument("disdatalog_entails: non-full rule " +
                                                     print_rule(r));
        bool single = std::all_of(r.head.begin(), r.head.end(),
                                  [](const head_conjunct& c) { return c.atoms.size() == 1; });
        if (single) {
            clausal.push_back(r);
        } else if (r.head.size() == 1) {
            for (const atom& h : r.head[0].atoms)
                clausal.push_back(make_rule(r.body, {{{}, {h}}}));
        } else {
            throw std::invalid_argument(
                "disdatalog_entails: disjunctive rule with a conjunctive head; apply shnf "
                "first: " +
                print_rule(r));
        }
    }

    std::vector<std::string> consts;
    {
        std::set<std::string> cs = consts_of(db);
        consts.assign(cs.begin(), cs.end());
    }

    atom_ids ids;
    std::vector<clause> clauses;
    for (const fact& f : db) clauses.push_back({ids.id(f) + 1});
    for (const auto& disjunct : q.disjuncts) {
        clause c;
        for (const atom& a : disjunct) c.push_back(-(ids.id(a) + 1));
        clauses.push_back(normalize(std::move(c)));
    }
    for (const rule& r : clausal) ground_rule_clauses(r, consts, ids, clauses);

    return resolution_unsat(std::move(clauses));
}

}  // namespace gsat
