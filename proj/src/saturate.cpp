#include "gsat/saturate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "gsat/normal_forms.hpp"
#include "gsat/unify.hpp"

namespace gsat {

namespace {

std::vector<std::string> canonical_vars(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back("X" + std::to_string(i));
    return out;
}

std::vector<std::string> sorted_vars(const std::set<std::string>& s) {
    return {s.begin(), s.end()};
}

// Enumerates every map from `vars` into `targets` (odometer order).
template <typename F>
void for_each_assignment(const std::vector<std::string>& vars,
                         const std::vector<std::string>& targets, F&& f) {
    if (targets.empty()) {
        if (vars.empty()) {
            subst s;
            f(s);
        }
        return;
    }
    std::vector<std::size_t> odo(vars.size(), 0);
    for (;;) {
        subst s;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] != targets[odo[i]]) s.map.emplace(vars[i], term::var(targets[odo[i]]));
        f(s);
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++odo[i] < targets.size()) break;
            odo[i] = 0;
        }
        if (i == vars.size()) break;
    }
}

bool shares_predicate(const std::vector<atom>& heads, const std::vector<atom>& body) {
    for (const atom& h : heads)
        for (const atom& b : body)
            if (h.pred == b.pred) return true;
    return false;
}

bool contains_atom(const std::vector<atom>& atoms, const atom& a) {
    return std::binary_search(atoms.begin(), atoms.end(), a);
}

// 2^(exponent) with saturation; closure sizes are compared against this.
double size_ceiling(double exponent) {
    if (exponent > 60) return std::numeric_limits<double>::infinity();
    return std::pow(2.0, exponent);
}

struct closure_state {
    std::vector<rule> rules;
    std::set<std::string> keys;
    std::vector<bool> deleted;
    std::deque<std::size_t> worklist;
    saturation_stats stats;
    bool subsume = false;

    bool insert(const rule& r) {
        std::string key = print_rule(r);
        if (!keys.insert(key).second) return false;
        if (subsume && is_subsumed(r)) return false;
        if (subsume) delete_subsumed_by(r);
        rules.push_back(r);
        deleted.push_back(false);
        worklist.push_back(rules.size() - 1);
        return true;
    }

    // theta with body(a) theta subset body(b) and head(a) theta subset head(b)
    static bool subsumes_rule(const rule& a, const rule& b);
    bool is_subsumed(const rule& r) const {
        for (std::size_t i = 0; i < rules.size(); ++i)
            if (!deleted[i] && subsumes_rule(rules[i], r)) return true;
        return false;
    }
    void delete_subsumed_by(const rule& r) {
        for (std::size_t i = 0; i < rules.size(); ++i)
            if (!deleted[i] && subsumes_rule(r, rules[i])) deleted[i] = true;
    }
};

bool match_atoms_into(const std::vector<atom>& pats, std::size_t i,
                      const std::vector<atom>& targets, subst& s);

bool match_atom_into(const atom& pat, const atom& target, subst& s,
                     std::vector<std::string>& bound) {
    if (pat.pred != target.pred || pat.args.size() != target.args.size()) return false;
    for (std::size_t k = 0; k < pat.args.size(); ++k) {
        const term& p = pat.args[k];
        const term& t = target.args[k];
        if (!p.is_var() || !t.is_var()) return false;  // rules here are function-free
        if (const term* img = s.lookup(p.name)) {
            if (img->name != t.name) return false;
        } else {
            s.map.emplace(p.name, term::var(t.name));
            bound.push_back(p.name);
        }
    }
    return true;
}

bool match_atoms_into(const std::vector<atom>& pats, std::size_t i,
                      const std::vector<atom>& targets, subst& s) {
    if (i == pats.size()) return true;
    for (const atom& t : targets) {
        std::vector<std::string> bound;
        if (match_atom_into(pats[i], t, s, bound)) {
            if (match_atoms_into(pats, i + 1, targets, s)) return true;
        }
        for (const std::string& v : bound) s.map.erase(v);
    }
    return false;
}

bool closure_state::subsumes_rule(const rule& a, const rule& b) {
    if (!is_full(a) || !is_full(b)) return false;  // only full rules take part
    if (a.body.size() > b.body.size()) return false;
    subst s;
    std::vector<atom> pats = a.body;
    for (const atom& h : a.head[0].atoms) pats.push_back(h);
    std::vector<atom> targets = b.body;
    // head atoms must match into the head, so match bodies first with the
    // combined continuation
    std::function<bool(std::size_t, subst&)> go = [&](std::size_t i, subst& cur) -> bool {
        if (i == pats.size()) return true;
        const bool into_head = i >= a.body.size();
        const std::vector<atom>& tgt = into_head ? b.head[0].atoms : b.body;
        for (const atom& t : tgt) {
            std::vector<std::string> bound;
            if (match_atom_into(pats[i], t, cur, bound)) {
                if (go(i + 1, cur)) return true;
            }
            for (const std::string& v : bound) cur.map.erase(v);
        }
        return false;
    };
    subst cur;
    return go(0, cur);
}

}  // namespace

void require_gtgds(const std::vector<rule>& rules) {
    for (const rule& r : rules) {
        if (r.head.size() != 1)
            throw rule_class_error("disjunctive rule needs dgsat: " + print_rule(r));
        if (!is_function_free(r.body) || !is_function_free(r.head[0].atoms))
            throw rule_class_error("functional rule is not a GTGD: " + print_rule(r));
        if (!is_guarded(r).guarded)
            throw unguarded_error("unguarded rule: " + print_rule(r));
    }
}

// --- simple saturation ---------------------------------------------------------

std::vector<rule> composition_step(const rule& full1, const rule& full2,
                                   std::size_t hwidth_bound) {
    auto [r1, r2, rho] = rename_apart(full1, full2);
    if (!shares_predicate(r1.head[0].atoms, r2.body)) return {};

    std::vector<std::string> all;
    {
        std::set<std::string> vs = all_vars(r1);
        std::set<std::string> vs2 = all_vars(r2);
        vs.insert(vs2.begin(), vs2.end());
        all = sorted_vars(vs);
    }
    std::vector<std::string> targets = canonical_vars(hwidth_bound);

    std::set<std::string> seen;
    std::vector<rule> out;
    for_each_assignment(all, targets, [&](const subst& theta) {
        std::vector<atom> eta = gsat::apply(theta, r1.head[0].atoms);
        std::vector<atom> beta2 = gsat::apply(theta, r2.body);
        bool resolved = false;
        for (const atom& b : beta2)
            if (contains_atom(eta, b)) resolved = true;
        if (!resolved) return;

        std::vector<atom> body = gsat::apply(theta, r1.body);
        for (const atom& b : beta2)
            if (!contains_atom(eta, b)) body.push_back(b);
        rule res = vnf(make_rule(sorted_atom_set(std::move(body)),
                                 {{{}, gsat::apply(theta, r2.head[0].atoms)}}));
        if (seen.insert(print_rule(res)).second) out.push_back(std::move(res));
    });
    return out;
}

std::vector<rule> original_step(const rule& nonfull, const rule& full) {
    auto [r1, r2, rho] = rename_apart(nonfull, full);
    if (!shares_predicate(r1.head[0].atoms, r2.body)) return {};

    const std::vector<std::string> xs = sorted_vars(body_vars(r1));
    const std::vector<std::string>& ys = r1.head[0].existentials;
    const std::set<std::string> yset(ys.begin(), ys.end());
    const std::vector<std::string> zs = sorted_vars(all_vars(r2));

    std::vector<std::string> x_targets = canonical_vars(xs.size());
    std::vector<std::string> z_targets = x_targets;
    z_targets.insert(z_targets.end(), ys.begin(), ys.end());

    std::set<std::string> seen;
    std::vector<rule> out;
    for_each_assignment(xs, x_targets, [&](const subst& tx) {
        std::vector<atom> eta = gsat::apply(tx, r1.head[0].atoms);
        std::vector<atom> beta = gsat::apply(tx, r1.body);
        std::set<std::string> x_image;
        for (const std::string& x : xs) {
            const term* img = tx.lookup(x);
            x_image.insert(img ? img->name : x);
        }
        for_each_assignment(zs, z_targets, [&](const subst& tz) {
            std::vector<atom> beta2 = gsat::apply(tz, r2.body);
            bool resolved = false;
            std::vector<atom> remaining;
            for (const atom& b : beta2) {
                if (contains_atom(eta, b))
                    resolved = true;
                else
                    remaining.push_back(b);
            }
            if (!resolved) return;
            for (const atom& b : remaining)
                for (const std::string& v : vars_of(b))
                    if (!x_image.count(v)) return;  // vars(beta' \ eta) must sit in x theta

            std::vector<atom> eta2;
            for (const atom& h : gsat::apply(tz, r2.head[0].atoms)) {
                std::set<std::string> hv = vars_of(h);
                bool touches_y = std::any_of(hv.begin(), hv.end(), [&](const std::string& v) {
                    return yset.count(v) > 0;
                });
                if (!touches_y) eta2.push_back(h);
            }
            if (eta2.empty()) return;

            std::vector<atom> body = beta;
            body.insert(body.end(), remaining.begin(), remaining.end());
            rule res = vnf(make_rule(sorted_atom_set(std::move(body)),
                                     {{{}, std::move(eta2)}}));
            if (seen.insert(print_rule(res)).second) out.push_back(std::move(res));
        });
    });
    return out;
}

saturation_result ssat(const std::vector<rule>& rules, saturation_options opts) {
    require_gtgds(rules);
    std::vector<rule> H = vnf(hnf(rules));
    std::size_t w = widths(H).width;
    std::size_t hbound = widths(H).hwidth;

    std::set<std::string> preds;
    std::size_t max_arity = 0;
    for (const rule& r : rules) {
        for (const atom& a : r.body) {
            preds.insert(a.pred);
            max_arity = std::max(max_arity, a.args.size());
        }
        for (const head_conjunct& c : r.head)
            for (const atom& a : c.atoms) {
                preds.insert(a.pred);
                max_arity = std::max(max_arity, a.args.size());
            }
    }
    double ceiling = size_ceiling(2.0 * static_cast<double>(preds.size()) *
                                  std::pow(static_cast<double>(w), static_cast<double>(max_arity)));

    closure_state st;
    st.subsume = opts.subsume;
    std::vector<rule> nonfull_originals;
    for (const rule& r : H) {
        if (is_full(r))
            st.insert(r);
        else
            nonfull_originals.push_back(r);
    }

    auto check_shape = [&](const rule& r) {
        bool ok = is_full(r) && widths(r).width <= w && print_rule(vnf(r)) == print_rule(r);
        if (!ok) ++st.stats.shape_violations;
    };

    while (!st.worklist.empty()) {
        std::size_t i = st.worklist.front();
        st.worklist.pop_front();
        if (st.deleted[i]) continue;
        rule ri = st.rules[i];

        for (const rule& nf : nonfull_originals) {
            ++st.stats.pairs_processed;
            for (const rule& res : original_step(nf, ri)) {
                ++st.stats.inferences;
                check_shape(res);
                st.insert(res);
            }
        }
        std::size_t count = st.rules.size();
        for (std::size_t j = 0; j < count; ++j) {
            if (st.deleted[j]) continue;
            rule rj = st.rules[j];
            ++st.stats.pairs_processed;
            for (const rule& res : composition_step(ri, rj, hbound)) {
                ++st.stats.inferences;
                check_shape(res);
                st.insert(res);
            }
            if (j != i) {
                for (const rule& res : composition_step(rj, ri, hbound)) {
                    ++st.stats.inferences;
                    check_shape(res);
                    st.insert(res);
                }
            }
            if (st.rules.size() > opts.max_rules)
                throw std::runtime_error("ssat: closure exceeded the practical rule cap");
        }
        if (static_cast<double>(st.rules.size()) > ceiling) ++st.stats.size_ceiling_hits;
    }

    saturation_result out;
    for (std::size_t i = 0; i < st.rules.size(); ++i)
        if (!st.deleted[i]) out.rules.push_back(st.rules[i]);
    std::sort(out.rules.begin(), out.rules.end(),
              [](const rule& a, const rule& b) { return print_rule(a) < print_rule(b); });
    out.stats = st.stats;
    out.stats.closure_size = out.rules.size();
    return out;
}

// --- guarded saturation ----------------------------------------------------------

namespace {

// VNF(HNF(.)) of a single derived rule; the HNF split may emit two rules.
std::vector<rule> vnf_hnf(const rule& r) {
    std::vector<rule> out;
    for (const rule& h : hnf({r})) out.push_back(vnf(h));
    return out;
}

}  // namespace

std::vector<rule> evolve_step(const rule& nonfull, const rule& full) {
    auto [tau, tau2, rho] = rename_apart(nonfull, full);
    const std::vector<std::string>& ys = tau.head[0].existentials;
    const std::set<std::string> yset(ys.begin(), ys.end());
    const std::set<std::string> xs = body_vars(tau);

    std::vector<rule> out;
    std::set<std::string> seen;
    guard_info gi = is_guarded(tau2);

    for (const atom& guard : gi.guards) {
        for (const atom& h : tau.head[0].atoms) {
            auto theta0 = mgu({{h, guard}}, yset);
            if (!theta0) continue;

            // S' is fixed by the guard choice: the guard plus every body
            // atom whose image under the guard mgu touches the existentials.
            std::vector<atom> s_rest;
            std::vector<atom> s_all{guard};
            for (const atom& b : tau2.body) {
                if (b == guard) continue;
                std::set<std::string> bv = vars_of(gsat::apply(*theta0, b));
                bool touches = std::any_of(bv.begin(), bv.end(), [&](const std::string& v) {
                    return yset.count(v) > 0;
                });
                if (touches) {
                    s_rest.push_back(b);
                    s_all.push_back(b);
                }
            }

            // Assign each remaining S' atom to a head atom of the non-full
            // premise and extend the mgu.
            std::vector<std::vector<atom>> candidates;
            bool feasible = true;
            for (const atom& b : s_rest) {
                std::vector<atom> cands;
                for (const atom& ha : tau.head[0].atoms)
                    if (ha.pred == b.pred && ha.args.size() == b.args.size())
                        cands.push_back(ha);
                if (cands.empty()) feasible = false;
                candidates.push_back(std::move(cands));
            }
            if (!feasible) continue;

            std::vector<std::size_t> pick(s_rest.size(), 0);
            for (;;) {
                std::vector<std::pair<atom, atom>> pairs{{h, guard}};
                for (std::size_t k = 0; k < s_rest.size(); ++k)
                    pairs.emplace_back(candidates[k][pick[k]], s_rest[k]);
                auto theta = mgu(pairs, yset);
                if (theta) {
                    bool evc = true;
                    for (const std::string& x : xs) {
                        const term* img = theta->lookup(x);
                        if (img && yset.count(img->name)) evc = false;
                    }
                    if (evc) {
                        for (const atom& b : tau2.body) {
                            std::set<std::string> bv = vars_of(gsat::apply(*theta, b));
                            bool touches = std::any_of(
                                bv.begin(), bv.end(),
                                [&](const std::string& v) { return yset.count(v) > 0; });
                            if (touches &&
                                std::find(s_all.begin(), s_all.end(), b) == s_all.end())
                                evc = false;
                        }
                    }
                    if (evc) {
                        std::vector<atom> body = gsat::apply(*theta, tau.body);
                        for (const atom& b : tau2.body)
                            if (std::find(s_all.begin(), s_all.end(), b) == s_all.end())
                                body.push_back(gsat::apply(*theta, b));
                        std::vector<atom> head = gsat::apply(*theta, tau.head[0].atoms);
                        for (const atom& a : gsat::apply(*theta, tau2.head[0].atoms)) head.push_back(a);
                        rule res = make_rule(sorted_atom_set(std::move(body)),
                                             {{ys, sorted_atom_set(std::move(head))}});
                        for (const rule& split : vnf_hnf(res))
                            if (seen.insert(print_rule(split)).second) out.push_back(split);
                    }
                }
                std::size_t k = 0;
                for (; k < pick.size(); ++k) {
                    if (++pick[k] < candidates[k].size()) break;
                    pick[k] = 0;
                }
                if (k == pick.size()) break;
            }
        }
    }
    return out;
}

saturation_result gsat(const std::vector<rule>& rules, saturation_options opts) {
    require_gtgds(rules);
    std::vector<rule> H = vnf(hnf(rules));
    rule_widths hw = widths(H);

    std::set<std::string> preds;
    std::size_t max_arity = 0;
    for (const rule& r : rules) {
        for (const atom& a : r.body) {
            preds.insert(a.pred);
            max_arity = std::max(max_arity, a.args.size());
        }
        for (const head_conjunct& c : r.head)
            for (const atom& a : c.atoms) {
                preds.insert(a.pred);
                max_arity = std::max(max_arity, a.args.size());
            }
    }
    double ceiling = size_ceiling(
        static_cast<double>(preds.size()) *
        (std::pow(static_cast<double>(hw.bwidth), static_cast<double>(max_arity)) +
         std::pow(static_cast<double>(hw.hwidth), static_cast<double>(max_arity))));

    closure_state st;
    st.subsume = opts.subsume;
    for (const rule& r : H) st.insert(r);

    auto check_shape = [&](const rule& r) {
        rule_widths rw = widths(r);
        bool hnf_ok = is_full(r) || std::all_of(r.head[0].atoms.begin(), r.head[0].atoms.end(),
                                                [&](const atom& a) {
                                                    std::set<std::string> av = vars_of(a);
                                                    for (const std::string& e :
                                                         r.head[0].existentials)
                                                        if (av.count(e)) return true;
                                                    return false;
                                                });
        bool ok = is_guarded(r).guarded && hnf_ok && rw.bwidth <= hw.bwidth &&
                  rw.hwidth <= hw.hwidth && print_rule(vnf(r)) == print_rule(r);
        if (!ok) ++st.stats.shape_violations;
    };

    while (!st.worklist.empty()) {
        std::size_t i = st.worklist.front();
        st.worklist.pop_front();
        if (st.deleted[i]) continue;
        rule ri = st.rules[i];
        bool ri_full = is_full(ri);

        std::size_t count = st.rules.size();
        for (std::size_t j = 0; j < count; ++j) {
            if (st.deleted[j]) continue;
            rule rj = st.rules[j];
            ++st.stats.pairs_processed;
            std::vector<rule> produced;
            if (!ri_full && is_full(rj)) {
                produced = evolve_step(ri, rj);
            }
            if (ri_full && !is_full(rj) && i != j) {
                std::vector<rule> more = evolve_step(rj, ri);
                produced.insert(produced.end(), more.begin(), more.end());
            }
            for (const rule& res : produced) {
                ++st.stats.inferences;
                check_shape(res);
                st.insert(res);
            }
            if (st.rules.size() > opts.max_rules)
                throw std::runtime_error("gsat: closure exceeded the practical rule cap");
        }
        if (static_cast<double>(st.rules.size()) > ceiling) ++st.stats.size_ceiling_hits;
    }

    saturation_result out;
    for (std::size_t i = 0; i < st.rules.size(); ++i)
        if (!st.deleted[i] && is_full(st.rules[i])) out.rules.push_back(st.rules[i]);
    std::sort(out.rules.begin(), out.rules.end(),
              [](const rule& a, const rule& b) { return print_rule(a) < print_rule(b); });
    out.stats = st.stats;
    out.stats.closure_size = st.rules.size();
    return out;
}

}  // namespace gsat
