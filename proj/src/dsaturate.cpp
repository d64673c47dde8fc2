#include "gsat/dsaturate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "gsat/unify.hpp"

namespace gsat {

gsrule to_gsrule(const rule& r) {
    gsrule out;
    out.body = r.body;
    std::vector<atom> head;
    for (const head_conjunct& c : r.head) {
        if (c.atoms.size() != 1 || !c.existentials.empty())
            throw std::invalid_argument("not a Skolemized single-headed rule: " + print_rule(r));
        head.push_back(c.atoms[0]);
    }
    out.head = sorted_atom_set(std::move(head));
    return out;
}

rule to_rule(const gsrule& r) {
    std::vector<head_conjunct> head;
    for (const atom& a : r.head) head.push_back({{}, {a}});
    return make_rule(r.body, std::move(head));
}

std::string print_gsrule(const gsrule& r) { return print_rule(to_rule(r)); }

bool gs_full(const gsrule& r) {
    return is_function_free(r.body) && is_function_free(r.head);
}

bool gs_nonfull(const gsrule& r) {
    return is_function_free(r.body) && has_functional_atom(r.head);
}

gsrule gs_vnf(const gsrule& r) { return to_gsrule(vnf(to_rule(r))); }

std::vector<gsrule> devolve_step(const gsrule& nonfull, const gsrule& other) {
    auto [tau, tau2, rho] = rename_apart(to_rule(nonfull), to_rule(other));
    gsrule t1 = to_gsrule(tau);
    gsrule t2 = to_gsrule(tau2);

    std::vector<atom> candidates;
    if (gs_full(t2)) {
        std::set<std::string> bv = vars_of(t2.body);
        for (const atom& b : t2.body) {
            std::set<std::string> av = vars_of(b);
            if (std::includes(av.begin(), av.end(), bv.begin(), bv.end()))
                candidates.push_back(b);
        }
    } else {
        for (const atom& b : t2.body)
            if (is_functional(b)) candidates.push_back(b);
    }

    std::vector<gsrule> out;
    std::set<std::string> seen;
    for (const atom& h : t1.head) {
        if (!is_functional(h)) continue;
        for (const atom& b : candidates) {
            auto theta = mgu({{h, b}});
            if (!theta) continue;
            atom h_img = gsat::apply(*theta, h);
            atom b_img = gsat::apply(*theta, b);
            if (has_nested_function(h_img) || has_nested_function(b_img))
                throw std::logic_error("devolve: unified image is not simple");

            std::vector<atom> body = gsat::apply(*theta, t1.body);
            for (const atom& other_b : t2.body)
                if (!(other_b == b)) body.push_back(gsat::apply(*theta, other_b));

            std::vector<atom> head;
            for (const atom& other_h : t1.head)
                if (!(other_h == h)) head.push_back(gsat::apply(*theta, other_h));
            for (const atom& h2 : t2.head) head.push_back(gsat::apply(*theta, h2));

            gsrule res;
            res.body = sorted_atom_set(std::move(body));
            res.head = sorted_atom_set(std::move(head));
            res = gs_vnf(res);
            if (seen.insert(print_gsrule(res)).second) out.push_back(std::move(res));
        }
    }
    return out;
}

void require_disgtgds(const std::vector<rule>& rules) {
    for (const rule& r : rules) {
        if (!is_function_free(r.body))
            throw rule_class_error("functional rule is not a DisGTGD: " + print_rule(r));
        for (const head_conjunct& c : r.head)
            if (!is_function_free(c.atoms))
                throw rule_class_error("functional rule is not a DisGTGD: " + print_rule(r));
        if (!is_guarded(r).guarded) throw unguarded_error("unguarded rule: " + print_rule(r));
    }
}

dgsat_result dgsat(const std::vector<rule>& rules, saturation_options opts) {
    require_disgtgds(rules);

    dgsat_result result;
    shnf_result sh = shnf(rules);
    result.fresh_predicates = sh.fresh_predicates;
    std::size_t shnf_bwidth = 0;
    for (const rule& r : sh.rules) shnf_bwidth = std::max(shnf_bwidth, widths(r).bwidth);

    skolemize_result sk = skolemize(sh.rules);
    result.skolems = std::move(sk.table);

    std::set<std::string> preds;
    std::size_t max_arity = 0;
    for (const rule& r : sh.rules) {
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
    std::size_t skolem_count = result.skolems.fn.size();
    double exponent = 2.0 * static_cast<double>(preds.size()) *
                      std::pow(static_cast<double>(shnf_bwidth),
                               static_cast<double>(max_arity) * static_cast<double>(shnf_bwidth)) *
                      std::pow(static_cast<double>(max_arity), static_cast<double>(skolem_count));
    double ceiling =
        exponent > 60 ? std::numeric_limits<double>::infinity() : std::pow(2.0, exponent);

    std::vector<gsrule> state;
    std::set<std::string> keys;
    std::deque<std::size_t> worklist;
    saturation_stats stats;

    auto check_shape = [&](const gsrule& r) {
        rule as_rule = to_rule(r);
        std::string gs_err = guarded_simple_violation(as_rule);
        bool ok = gs_err.empty() && widths(as_rule).width <= shnf_bwidth &&
                  print_gsrule(gs_vnf(r)) == print_gsrule(r);
        if (!ok) ++stats.shape_violations;
    };

    auto insert = [&](const gsrule& r) {
        std::string key = print_gsrule(r);
        if (!keys.insert(key).second) return;
        state.push_back(r);
        worklist.push_back(state.size() - 1);
    };

    for (const rule& r : sk.rules) insert(to_gsrule(vnf(r)));

    while (!worklist.empty()) {
        std::size_t i = worklist.front();
        worklist.pop_front();
        gsrule ri = state[i];
        bool ri_nonfull = gs_nonfull(ri);

        std::size_t count = state.size();
        for (std::size_t j = 0; j < count; ++j) {
            gsrule rj = state[j];
            ++stats.pairs_processed;
            std::vector<gsrule> produced;
            if (ri_nonfull) {
                std::vector<gsrule> more = devolve_step(ri, rj);
                produced.insert(produced.end(), more.begin(), more.end());
            }
            if (gs_nonfull(rj) && i != j) {
                std::vector<gsrule> more = devolve_step(rj, ri);
                produced.insert(produced.end(), more.begin(), more.end());
            }
            for (const gsrule& res : produced) {
                ++stats.inferences;
                check_shape(res);
                insert(res);
            }
            if (state.size() > opts.max_rules)
                throw std::runtime_error("dgsat: closure exceeded the practical rule cap");
        }
        if (static_cast<double>(state.size()) > ceiling) ++stats.size_ceiling_hits;
    }

    for (const gsrule& r : state) {
        if (!is_function_free(r.body)) continue;  // no immediate full consequence
        std::optional<rule> full = ifc(to_rule(r));
        if (full) result.rules.push_back(*full);
    }
    std::sort(result.rules.begin(), result.rules.end(),
              [](const rule& a, const rule& b) { return print_rule(a) < print_rule(b); });
    result.rules.erase(std::unique(result.rules.begin(), result.rules.end()),
                       result.rules.end());
    result.stats = stats;
    result.stats.closure_size = state.size();
    return result;
}

}  // namespace gsat
