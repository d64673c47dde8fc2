#include "gsat/normal_forms.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gsat/unify.hpp"

namespace gsat {

namespace {

// Body variables in first-occurrence order over the canonical atom order.
std::vector<std::string> body_var_order(const rule& r) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const atom& a : r.body) {
        std::vector<std::string> vs;
        collect_vars(a, vs);
        for (const std::string& v : vs)
            if (seen.insert(v).second) order.push_back(v);
    }
    return order;
}

rule vnf_pass(const rule& r) {
    std::vector<std::string> border = body_var_order(r);
    subst rho;
    // Two-step renaming through reserved names avoids clashes when the
    // input already uses X1.. in a different arrangement.
    subst tmp;
    int k = 0;
    for (const std::string& v : border) tmp.map.emplace(v, term::var("~v" + std::to_string(++k)));

    std::vector<atom> body = gsat::apply(tmp, r.body);
    for (int i = 1; i <= k; ++i)
        rho.map.emplace("~v" + std::to_string(i), term::var("X" + std::to_string(i)));
    body = gsat::apply(rho, body);

    std::vector<head_conjunct> head;
    for (const head_conjunct& c : r.head) {
        std::set<std::string> exist(c.existentials.begin(), c.existentials.end());
        std::vector<std::string> eorder;
        std::set<std::string> seen;
        for (const atom& a : c.atoms) {
            std::vector<std::string> vs;
            collect_vars(a, vs);
            for (const std::string& v : vs)
                if (exist.count(v) && seen.insert(v).second) eorder.push_back(v);
        }
        subst etmp = tmp;
        int j = 0;
        for (const std::string& e : eorder) etmp.map.emplace(e, term::var("~e" + std::to_string(++j)));
        subst efin = rho;
        for (int i = 1; i <= j; ++i)
            efin.map.emplace("~e" + std::to_string(i), term::var("Y" + std::to_string(i)));

        head_conjunct nc;
        nc.atoms = gsat::apply(efin, gsat::apply(etmp, c.atoms));
        for (int i = 1; i <= j; ++i) nc.existentials.push_back("Y" + std::to_string(i));
        head.push_back(std::move(nc));
    }
    return make_rule(std::move(body), std::move(head));
}

}  // namespace

rule vnf(const rule& r) {
    // Renaming can reorder the canonical atom set, so iterate; on the rare
    // cycle, pick the lexicographically least printed form in it.
    rule cur = r;
    std::set<std::string> seen;
    std::string best_key;
    rule best = cur;
    for (int i = 0; i < 16; ++i) {
        rule next = vnf_pass(cur);
        std::string key = print_rule(next);
        if (key == print_rule(cur)) return next;
        if (!seen.insert(key).second) break;
        if (best_key.empty() || key < best_key) {
            best_key = key;
            best = next;
        }
        cur = next;
    }
    return best;
}

std::vector<rule> vnf(const std::vector<rule>& rules) {
    std::vector<rule> out;
    out.reserve(rules.size());
    for (const rule& r : rules) out.push_back(vnf(r));
    return out;
}

std::vector<rule> hnf(const std::vector<rule>& rules) {
    std::vector<rule> out;
    for (const rule& r : rules) {
        if (r.head.size() != 1)
            throw std::invalid_argument("hnf is defined for TGDs only, got a disjunctive rule: " +
                                        print_rule(r));
        const head_conjunct& c = r.head[0];
        if (c.existentials.empty()) {
            out.push_back(r);
            continue;
        }
        std::set<std::string> ev(c.existentials.begin(), c.existentials.end());
        std::vector<atom> with_exist, without;
        for (const atom& a : c.atoms) {
            std::set<std::string> av = vars_of(a);
            bool has = std::any_of(av.begin(), av.end(),
                                   [&](const std::string& v) { return ev.count(v) > 0; });
            (has ? with_exist : without).push_back(a);
        }
        if (without.empty()) {
            out.push_back(r);
            continue;
        }
        out.push_back(make_rule(r.body, {{c.existentials, with_exist}}));
        out.push_back(make_rule(r.body, {{{}, without}}));
    }
    return out;
}

shnf_result shnf(const std::vector<rule>& rules) {
    shnf_result res;
    int counter = 0;
    for (const rule& r : rules) {
        bool single = std::all_of(r.head.begin(), r.head.end(),
                                  [](const head_conjunct& c) { return c.atoms.size() == 1; });
        if (single) {
            res.rules.push_back(r);
            continue;
        }
        std::vector<std::string> border = body_var_order(r);
        std::vector<head_conjunct> new_head;
        std::vector<rule> projections;
        for (const head_conjunct& c : r.head) {
            std::string pred = "_shnf" + std::to_string(++counter);
            res.fresh_predicates.push_back(pred);
            std::set<std::string> exported = vars_of(c.atoms);
            atom fresh;
            fresh.pred = pred;
            for (const std::string& v : border)
                if (exported.count(v)) fresh.args.push_back(term::var(v));
            for (const std::string& e : c.existentials) fresh.args.push_back(term::var(e));
            new_head.push_back({c.existentials, {fresh}});
            for (const atom& h : c.atoms)
                projections.push_back(make_rule({fresh}, {{{}, {h}}}));
        }
        res.rules.push_back(make_rule(r.body, std::move(new_head)));
        for (rule& p : projections) res.rules.push_back(std::move(p));
    }
    return res;
}

skolemize_result skolemize(const std::vector<rule>& rules) {
    skolemize_result res;
    int group = 0;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const rule& r = rules[ri];
        for (const head_conjunct& c : r.head) {
            if (c.atoms.size() != 1)
                throw std::invalid_argument("skolemize requires single-headed rules: " +
                                            print_rule(r));
        }
        std::vector<std::string> border = body_var_order(r);
        std::vector<term> universal_args;
        for (const std::string& v : border) universal_args.push_back(term::var(v));

        std::vector<head_conjunct> head;
        for (std::size_t ci = 0; ci < r.head.size(); ++ci) {
            const head_conjunct& c = r.head[ci];
            if (c.existentials.empty()) {
                head.push_back(c);
                continue;
            }
            ++group;
            subst sk;
            for (std::size_t j = 0; j < c.existentials.size(); ++j) {
                std::string fn =
                    "f" + std::to_string(group) + "_" + std::to_string(j + 1);
                res.table.fn[{ri, ci, c.existentials[j]}] = fn;
                sk.map.emplace(c.existentials[j], term::fn(fn, universal_args));
            }
            head_conjunct nc;
            for (const atom& a : c.atoms) {
                atom na = a;
                for (term& t : na.args)
                    if (t.is_var())
                        if (const term* img = sk.lookup(t.name)) t = *img;
                nc.atoms.push_back(std::move(na));
            }
            nc.atoms = sorted_atom_set(std::move(nc.atoms));
            head.push_back(std::move(nc));
        }
        res.rules.push_back(make_rule(r.body, std::move(head)));
    }
    return res;
}

rule deskolemize(const rule& r) {
    if (!is_function_free(r.body))
        throw std::invalid_argument("deskolemize: functional body atom in " + print_rule(r));
    std::set<std::string> used = all_vars(r);
    std::vector<head_conjunct> head;
    for (const head_conjunct& c : r.head) {
        if (!c.existentials.empty())
            throw std::invalid_argument("deskolemize: rule already has existentials");
        std::map<term, std::string> fresh_for;  // functional term -> variable
        std::vector<std::string> order;
        int next = 0;
        head_conjunct nc;
        for (const atom& a : c.atoms) {
            atom na = a;
            for (term& t : na.args) {
                if (!t.is_func()) continue;
                auto it = fresh_for.find(t);
                if (it == fresh_for.end()) {
                    std::string name;
                    do {
                        name = "Y" + std::to_string(++next);
                    } while (used.count(name));
                    it = fresh_for.emplace(t, name).first;
                    order.push_back(name);
                }
                t = term::var(it->second);
            }
            nc.atoms.push_back(std::move(na));
        }
        nc.atoms = sorted_atom_set(std::move(nc.atoms));
        nc.existentials = std::move(order);
        head.push_back(std::move(nc));
    }
    return make_rule(r.body, std::move(head));
}

std::optional<rule> ifc(const rule& r) {
    if (!is_function_free(r.body))
        throw std::invalid_argument("ifc: functional body atom in " + print_rule(r));
    std::vector<head_conjunct> head;
    for (const head_conjunct& c : r.head) {
        std::set<std::string> ev(c.existentials.begin(), c.existentials.end());
        head_conjunct nc;
        for (const atom& a : c.atoms) {
            if (!is_function_free(a)) continue;
            std::set<std::string> av = vars_of(a);
            bool has_exist = std::any_of(av.begin(), av.end(),
                                         [&](const std::string& v) { return ev.count(v) > 0; });
            if (!has_exist) nc.atoms.push_back(a);
        }
        if (nc.atoms.empty()) return std::nullopt;
        head.push_back(std::move(nc));
    }
    return make_rule(r.body, std::move(head));
}

}  // namespace gsat
