#include "gsat/chase.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace gsat {

namespace {

using binding = std::map<std::string, std::string>;

struct pred_index {
    std::map<std::string, std::vector<fact>> by_pred;

    void add(const fact& f) { by_pred[f.pred].push_back(f); }
    const std::vector<fact>* find(const std::string& pred) const {
        auto it = by_pred.find(pred);
        return it == by_pred.end() ? nullptr : &it->second;
    }
};

bool match_atom(const atom& pattern, const fact& f, binding& b,
                std::vector<std::string>& bound_here) {
    if (pattern.pred != f.pred || pattern.args.size() != f.args.size()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const term& pt = pattern.args[i];
        const term& ft = f.args[i];
        if (!ft.is_const()) return false;  // engine facts are function-free
        if (pt.is_const()) {
            if (pt.name != ft.name) return false;
        } else if (pt.is_var()) {
            auto it = b.find(pt.name);
            if (it == b.end()) {
                b.emplace(pt.name, ft.name);
                bound_here.push_back(pt.name);
            } else if (it->second != ft.name) {
                return false;
            }
        } else {
            return false;  // functional patterns are not chased
        }
    }
    return true;
}

// Enumerates homomorphisms of `atoms` into the indexed instance, extending
// `b`; when `delta_at` >= 0, that atom position matches `delta_fact` only.
void enumerate_matches(const std::vector<atom>& atoms, std::size_t i, const pred_index& idx,
                       int delta_at, const fact* delta_fact, binding& b,
                       const std::function<void(const binding&)>& emit) {
    if (i == atoms.size()) {
        emit(b);
        return;
    }
    std::vector<std::string> bound_here;
    auto try_fact = [&](const fact& f) {
        bound_here.clear();
        if (match_atom(atoms[i], f, b, bound_here)) {
            enumerate_matches(atoms, i + 1, idx, delta_at, delta_fact, b, emit);
        }
        for (const std::string& v : bound_here) b.erase(v);
    };
    if (static_cast<int>(i) == delta_at) {
        try_fact(*delta_fact);
        return;
    }
    if (const std::vector<fact>* facts = idx.find(atoms[i].pred)) {
        for (const fact& f : *facts) try_fact(f);
    }
}

std::string binding_key(int rule_index, const binding& b) {
    std::string key = std::to_string(rule_index);
    for (const auto& [v, c] : b) key += "|" + v + "=" + c;
    return key;
}

fact instantiate(const atom& a, const binding& b) {
    fact f;
    f.pred = a.pred;
    for (const term& t : a.args) {
        if (t.is_const()) {
            f.args.push_back(t);
        } else {
            f.args.push_back(term::cst(b.at(t.name)));
        }
    }
    return f;
}

// True iff some extension of `b` over the conjunct's existentials lands the
// whole conjunct inside the instance.
bool conjunct_satisfied(const head_conjunct& c, const binding& b, const pred_index& idx) {
    std::vector<atom> atoms = c.atoms;
    binding ext = b;
    bool found = false;
    std::function<void(const binding&)> emit = [&](const binding&) { found = true; };
    enumerate_matches(atoms, 0, idx, -1, nullptr, ext, emit);
    return found;
}

struct trigger_queue {
    std::deque<std::pair<int, binding>> pending;
    std::set<std::string> seen;

    void push(int rule_index, const binding& b) {
        if (seen.insert(binding_key(rule_index, b)).second) pending.emplace_back(rule_index, b);
    }
};

void discover_initial(const std::vector<rule>& rules, const pred_index& idx,
                      trigger_queue& q) {
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        binding b;
        std::function<void(const binding&)> emit = [&](const binding& full) {
            q.push(static_cast<int>(ri), full);
        };
        enumerate_matches(rules[ri].body, 0, idx, -1, nullptr, b, emit);
    }
}

void discover_from(const std::vector<rule>& rules, const pred_index& idx, const fact& f,
                   trigger_queue& q) {
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const std::vector<atom>& body = rules[ri].body;
        for (std::size_t p = 0; p < body.size(); ++p) {
            if (body[p].pred != f.pred) continue;
            binding b;
            std::function<void(const binding&)> emit = [&](const binding& full) {
                q.push(static_cast<int>(ri), full);
            };
            enumerate_matches(body, 0, idx, static_cast<int>(p), &f, b, emit);
        }
    }
}

struct bag_state {
    std::vector<std::set<fact>> bags;
    std::vector<int> parents;
    std::vector<int> created_step;
    std::vector<std::vector<fact>> births;

    int add_node(int parent, int step, const std::vector<fact>& birth) {
        bags.emplace_back(birth.begin(), birth.end());
        parents.push_back(parent);
        created_step.push_back(step);
        births.push_back(birth);
        return static_cast<int>(bags.size()) - 1;
    }

    int node_containing(const std::vector<fact>& facts) const {
        for (std::size_t v = 0; v < bags.size(); ++v) {
            bool all = true;
            for (const fact& f : facts)
                if (!bags[v].count(f)) {
                    all = false;
                    break;
                }
            if (all) return static_cast<int>(v);
        }
        return -1;
    }
};

bool guarded_by_bag(const fact& f, const std::set<fact>& bag) {
    std::set<std::string> cf = consts_of(f);
    for (const fact& g : bag) {
        std::set<std::string> cg = consts_of(g);
        if (std::includes(cg.begin(), cg.end(), cf.begin(), cf.end())) return true;
    }
    return false;
}

}  // namespace

bool satisfies(const instance& I, const query& q) {
    pred_index idx;
    for (const fact& f : I) idx.add(f);
    for (const auto& disjunct : q.disjuncts) {
        if (disjunct.empty()) return true;  // empty conjunction
        binding b;
        bool found = false;
        std::function<void(const binding&)> emit = [&](const binding&) { found = true; };
        enumerate_matches(disjunct, 0, idx, -1, nullptr, b, emit);
        if (found) return true;
    }
    return false;
}

namespace {

chase_run chase_impl(const instance& db, const std::vector<rule>& rules, chase_mode mode,
                     int budget, const std::function<bool(const instance&)>& stop) {
    if (budget <= 0) throw std::invalid_argument("chase: budget must be positive");
    for (const rule& r : rules) {
        if (r.head.size() != 1)
            throw std::invalid_argument("chase handles TGDs only; use disjunctive_chase for: " +
                                        print_rule(r));
        if (!is_function_free(r.body) || !is_function_free(r.head[0].atoms))
            throw std::invalid_argument("chase requires function-free rules: " + print_rule(r));
    }

    chase_run run;
    bool provenance = !rules.empty();
    for (const rule& r : rules)
        if (!is_guarded(r).guarded) provenance = false;

    instance I = db;
    pred_index idx;
    for (const fact& f : I) idx.add(f);

    bag_state bags;
    if (provenance) bags.add_node(-1, -1, {db.begin(), db.end()});

    trigger_queue q;
    discover_initial(rules, idx, q);

    long fresh = 0;
    if (stop && stop(I)) {
        run.final_instance = I;
        run.has_provenance = provenance;
        if (provenance)
            run.nodes.push_back({0, -1, -1, bags.births[0], {bags.bags[0].begin(), bags.bags[0].end()}});
        return run;
    }

    while (!q.pending.empty()) {
        if (static_cast<int>(run.steps.size()) >= budget) {
            run.exhausted = true;
            break;
        }
        auto [ri, b] = q.pending.front();
        q.pending.pop_front();
        const rule& r = rules[ri];
        const head_conjunct& c = r.head[0];

        if (mode == chase_mode::restricted && conjunct_satisfied(c, b, idx)) continue;

        binding full = b;
        for (const std::string& e : c.existentials)
            full.emplace(e, "_e" + std::to_string(++fresh));

        std::vector<fact> produced;
        for (const atom& a : c.atoms) produced.push_back(instantiate(a, full));
        produced = sorted_atom_set(std::move(produced));

        std::vector<fact> fresh_facts;
        for (const fact& f : produced)
            if (!I.count(f)) fresh_facts.push_back(f);

        chase_step step;
        step.rule_index = ri;
        step.trigger = b;

        if (!c.existentials.empty() || !fresh_facts.empty()) {
            step.new_facts = fresh_facts;
            for (const fact& f : fresh_facts) {
                I.insert(f);
                idx.add(f);
            }

            if (provenance) {
                std::vector<fact> image;
                for (const atom& a : r.body) image.push_back(instantiate(a, b));
                int v = bags.node_containing(image);
                if (v < 0)
                    throw std::logic_error("chase: trigger image escaped every bag for " +
                                           print_rule(r));
                step.fired_node = v;
                std::set<int> touched;
                if (c.existentials.empty()) {
                    for (const fact& f : produced)
                        if (bags.bags[v].insert(f).second) touched.insert(v);
                } else {
                    int nv = bags.add_node(v, static_cast<int>(run.steps.size()), produced);
                    touched.insert(nv);
                    // Propagate existing facts guarded by the new bag.
                    for (const fact& f : I)
                        if (!bags.bags[nv].count(f) && guarded_by_bag(f, bags.bags[nv]))
                            bags.bags[nv].insert(f);
                }
                // Propagate the new facts to every bag holding a guard for
                // them; one pass reaches guardedly-complete bags, the loop
                // just re-checks.
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t v2 = 0; v2 < bags.bags.size(); ++v2) {
                        for (const fact& f : fresh_facts) {
                            if (bags.bags[v2].count(f)) continue;
                            if (guarded_by_bag(f, bags.bags[v2])) {
                                bags.bags[v2].insert(f);
                                touched.insert(static_cast<int>(v2));
                                changed = true;
                            }
                        }
                    }
                }
                step.touched_nodes.assign(touched.begin(), touched.end());
            }

            run.steps.push_back(std::move(step));
            for (const fact& f : fresh_facts) discover_from(rules, idx, f, q);

            if (stop && stop(I)) break;
        }
        // A firing that changes nothing is consumed silently in either mode.
    }

    run.fixpoint = q.pending.empty() && !run.exhausted;
    run.final_instance = std::move(I);
    run.has_provenance = provenance;
    if (provenance) {
        for (std::size_t v = 0; v < bags.bags.size(); ++v) {
            run.nodes.push_back({static_cast<int>(v), bags.parents[v], bags.created_step[v],
                                 bags.births[v], {bags.bags[v].begin(), bags.bags[v].end()}});
        }
    }
    return run;
}

}  // namespace

chase_run chase(const instance& db, const std::vector<rule>& rules, chase_mode mode,
                int budget) {
    return chase_impl(db, rules, mode, budget, nullptr);
}

chase_answer chase_certain(const instance& db, const std::vector<rule>& rules, const query& q,
                           int budget, chase_mode mode) {
    chase_answer ans;
    bool hit = false;
    ans.run = chase_impl(db, rules, mode, budget, [&](const instance& I) {
        hit = satisfies(I, q);
        return hit;
    });
    if (hit) {
        ans.result = certainty::yes;
        ans.steps_used = static_cast<int>(ans.run.steps.size());
    } else if (ans.run.fixpoint && mode == chase_mode::restricted) {
        ans.result = certainty::refuted_at_fixpoint;
    } else {
        ans.result = certainty::unknown;
    }
    return ans;
}

// --- disjunctive chase -------------------------------------------------------

namespace {

struct search_node {
    instance facts;
    trigger_queue pending;
    std::string fresh_prefix;
    long fresh_counter = 0;
};

}  // namespace

disjunctive_answer disjunctive_chase(const instance& db, const std::vector<rule>& rules,
                                     const query& q, int node_budget) {
    if (node_budget <= 0) throw std::invalid_argument("disjunctive_chase: budget must be positive");
    for (const rule& r : rules) {
        if (!is_function_free(r.body)) throw std::invalid_argument("disjunctive_chase: functional rule");
        for (const head_conjunct& c : r.head)
            if (!is_function_free(c.atoms))
                throw std::invalid_argument("disjunctive_chase: functional rule");
    }

    disjunctive_answer ans;
    std::vector<search_node> state;

    auto make_index = [](const instance& I) {
        pred_index idx;
        for (const fact& f : I) idx.add(f);
        return idx;
    };

    tree_node root;
    root.id = 0;
    root.facts = db;
    root.satisfied = satisfies(db, q);
    ans.tree.nodes.push_back(root);
    state.emplace_back();
    state[0].facts = db;
    {
        pred_index idx = make_index(db);
        discover_initial(rules, idx, state[0].pending);
    }

    std::deque<int> open;
    if (!ans.tree.nodes[0].satisfied) open.push_back(0);

    bool out_of_budget = false;
    while (!open.empty()) {
        int id = open.front();
        open.pop_front();
        pred_index idx = make_index(state[id].facts);

        // Find the next active trigger (some rule whose every head conjunct
        // is still unsatisfied under an extension of the trigger).
        int fired_rule = -1;
        binding fired_binding;
        while (!state[id].pending.pending.empty()) {
            auto [ri, b] = state[id].pending.pending.front();
            state[id].pending.pending.pop_front();
            bool satisfied_already = false;
            for (const head_conjunct& c : rules[ri].head) {
                if (conjunct_satisfied(c, b, idx)) {
                    satisfied_already = true;
                    break;
                }
            }
            if (!satisfied_already) {
                fired_rule = ri;
                fired_binding = b;
                break;
            }
        }
        if (fired_rule < 0) {
            ans.tree.nodes[id].quiescent = true;
            continue;
        }

        const search_node parent = state[id];  // copy: state may reallocate below
        const rule& r = rules[fired_rule];
        bool branching = r.head.size() > 1;
        for (std::size_t ci = 0; ci < r.head.size(); ++ci) {
            if (static_cast<int>(ans.tree.nodes.size()) >= node_budget) {
                out_of_budget = true;
                break;
            }
            const head_conjunct& c = r.head[ci];
            search_node child;
            child.facts = parent.facts;
            child.pending = parent.pending;
            child.fresh_prefix = parent.fresh_prefix;
            child.fresh_counter = parent.fresh_counter;
            if (branching) child.fresh_prefix += std::to_string(ci) + "_";

            binding full = fired_binding;
            for (const std::string& e : c.existentials)
                full.emplace(e, "_e" + child.fresh_prefix + std::to_string(++child.fresh_counter));
            std::vector<fact> produced;
            for (const atom& a : c.atoms) produced.push_back(instantiate(a, full));

            pred_index cidx = make_index(child.facts);
            std::vector<fact> fresh_facts;
            for (const fact& f : sorted_atom_set(std::move(produced)))
                if (!child.facts.count(f)) fresh_facts.push_back(f);
            for (const fact& f : fresh_facts) {
                child.facts.insert(f);
                cidx.add(f);
            }
            for (const fact& f : fresh_facts) discover_from(rules, cidx, f, child.pending);

            tree_node tn;
            tn.id = static_cast<int>(ans.tree.nodes.size());
            tn.parent = id;
            tn.depth = ans.tree.nodes[id].depth + 1;
            tn.rule_index = fired_rule;
            tn.conjunct_index = static_cast<int>(ci);
            tn.facts = child.facts;
            tn.satisfied = satisfies(child.facts, q);
            ans.tree.nodes.push_back(tn);
            state.push_back(std::move(child));
            if (!tn.satisfied) open.push_back(tn.id);
        }
        if (out_of_budget) break;
    }

    std::vector<bool> has_children(ans.tree.nodes.size(), false);
    for (const tree_node& n : ans.tree.nodes)
        if (n.parent >= 0) has_children[n.parent] = true;
    for (const tree_node& n : ans.tree.nodes)
        if (!has_children[n.id]) ans.tree.leaves.push_back(n.id);

    if (out_of_budget) {
        ans.result = tree_result::unknown;
        return ans;
    }
    bool all_satisfied = true;
    for (int leaf : ans.tree.leaves)
        if (!ans.tree.nodes[leaf].satisfied) all_satisfied = false;
    ans.result = all_satisfied ? tree_result::proven : tree_result::unknown_at_fixpoint;
    return ans;
}

// --- one-pass check ----------------------------------------------------------

one_pass_report check_one_pass(const chase_run& run) {
    if (!run.has_provenance)
        throw std::invalid_argument("check_one_pass: run carries no node provenance");

    auto in_subtree = [&](int v, int w) {
        // true iff w lies in the subtree rooted at v
        while (w >= 0) {
            if (w == v) return true;
            w = run.nodes[w].parent;
        }
        return false;
    };

    int n = static_cast<int>(run.steps.size());
    one_pass_report rep;
    for (int k = 0; k < n; ++k) {
        for (const chase_node& node : run.nodes) {
            int v = node.id;
            if (node.created_step >= k) continue;  // node not present before step k
            bool modifies = false;
            for (int t : run.steps[k].touched_nodes)
                if (in_subtree(v, t)) modifies = true;
            if (!modifies) continue;
            for (int j = node.created_step + 1; j <= k; ++j) {
                if (!in_subtree(v, run.steps[j].fired_node)) {
                    rep.one_pass = false;
                    rep.violation = one_pass_violation{v, j, k};
                    return rep;
                }
            }
        }
    }
    return rep;
}

// --- trace export --------------------------------------------------------------

std::string run_to_json(const chase_run& run) {
    nlohmann::json j;
    j["steps"] = nlohmann::json::array();
    for (const chase_step& s : run.steps) {
        nlohmann::json js;
        js["rule"] = s.rule_index;
        js["trigger"] = s.trigger;
        js["new_facts"] = nlohmann::json::array();
        for (const fact& f : s.new_facts) js["new_facts"].push_back(print_atom(f));
        js["fired_node"] = s.fired_node;
        js["touched_nodes"] = s.touched_nodes;
        j["steps"].push_back(js);
    }
    j["nodes"] = nlohmann::json::array();
    for (const chase_node& v : run.nodes) {
        nlohmann::json jn;
        jn["id"] = v.id;
        jn["parent"] = v.parent;
        jn["created_step"] = v.created_step;
        jn["birth_facts"] = nlohmann::json::array();
        for (const fact& f : v.birth_facts) jn["birth_facts"].push_back(print_atom(f));
        jn["bag"] = nlohmann::json::array();
        for (const fact& f : v.bag) jn["bag"].push_back(print_atom(f));
        j["nodes"].push_back(jn);
    }
    j["fixpoint"] = run.fixpoint;
    j["exhausted"] = run.exhausted;
    return j.dump(2);
}

std::string run_to_dot(const chase_run& run) {
    std::string out = "digraph chase {\n  node [shape=box];\n";
    for (const chase_node& v : run.nodes) {
        std::string label;
        for (const fact& f : v.bag) {
            if (!label.empty()) label += "\\n";
            label += print_atom(f);
        }
        out += "  n" + std::to_string(v.id) + " [label=\"" + label + "\"];\n";
        if (v.parent >= 0)
            out += "  n" + std::to_string(v.parent) + " -> n" + std::to_string(v.id) + ";\n";
    }
    return out + "}\n";
}

std::string tree_to_json(const chase_tree& tree) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const tree_node& n : tree.nodes) {
        nlohmann::json jn;
        jn["id"] = n.id;
        jn["parent"] = n.parent;
        jn["rule"] = n.rule_index;
        jn["conjunct"] = n.conjunct_index;
        jn["satisfied"] = n.satisfied;
        jn["facts"] = nlohmann::json::array();
        for (const fact& f : n.facts) jn["facts"].push_back(print_atom(f));
        j["nodes"].push_back(jn);
    }
    j["leaves"] = tree.leaves;
    return j.dump(2);
}

std::string tree_to_dot(const chase_tree& tree) {
    std::string out = "digraph chase_tree {\n  node [shape=box];\n";
    for (const tree_node& n : tree.nodes) {
        std::string label;
        for (const fact& f : n.facts) {
            if (!label.empty()) label += "\\n";
            label += print_atom(f);
        }
        out += "  n" + std::to_string(n.id) + " [label=\"" + label + "\"" +
               (n.satisfied ? ", style=bold" : "") + "];\n";
        if (n.parent >= 0)
            out += "  n" + std::to_string(n.parent) + " -> n" + std::to_string(n.id) + ";\n";
    }
    return out + "}\n";
}

}  // namespace gsat
