#include "gsat/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsat {

std::vector<atom> sorted_atom_set(std::vector<atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

void collect_vars(const term& t, std::vector<std::string>& out) {
    if (t.is_var()) {
        out.push_back(t.name);
    } else if (t.is_func()) {
        for (const term& a : t.args) collect_vars(a, out);
    }
}

void collect_vars(const atom& a, std::vector<std::string>& out) {
    for (const term& t : a.args) collect_vars(t, out);
}

std::set<std::string> vars_of(const atom& a) {
    std::vector<std::string> v;
    collect_vars(a, v);
    return {v.begin(), v.end()};
}

std::set<std::string> vars_of(const std::vector<atom>& atoms) {
    std::set<std::string> out;
    for (const atom& a : atoms) {
        std::vector<std::string> v;
        collect_vars(a, v);
        out.insert(v.begin(), v.end());
    }
    return out;
}

std::set<std::string> body_vars(const rule& r) { return vars_of(r.body); }

std::set<std::string> all_vars(const rule& r) {
    std::set<std::string> out = vars_of(r.body);
    for (const head_conjunct& c : r.head) {
        auto hv = vars_of(c.atoms);
        out.insert(hv.begin(), hv.end());
    }
    return out;
}

static void collect_consts(const term& t, std::set<std::string>& out) {
    if (t.is_const()) {
        out.insert(t.name);
    } else if (t.is_func()) {
        for (const term& a : t.args) collect_consts(a, out);
    }
}

std::set<std::string> consts_of(const atom& a) {
    std::set<std::string> out;
    for (const term& t : a.args) collect_consts(t, out);
    return out;
}

std::set<std::string> consts_of(const instance& facts) {
    std::set<std::string> out;
    for (const fact& f : facts) {
        for (const term& t : f.args) collect_consts(t, out);
    }
    return out;
}

bool is_ground(const term& t) {
    if (t.is_var()) return false;
    for (const term& a : t.args)
        if (!is_ground(a)) return false;
    return true;
}

bool is_ground(const atom& a) {
    for (const term& t : a.args)
        if (!is_ground(t)) return false;
    return true;
}

bool is_function_free(const term& t) { return !t.is_func(); }

bool is_function_free(const atom& a) {
    for (const term& t : a.args)
        if (t.is_func()) return false;
    return true;
}

bool is_function_free(const std::vector<atom>& atoms) {
    for (const atom& a : atoms)
        if (!is_function_free(a)) return false;
    return true;
}

bool has_nested_function(const atom& a) {
    for (const term& t : a.args) {
        if (!t.is_func()) continue;
        for (const term& arg : t.args)
            if (arg.is_func()) return true;
    }
    return false;
}

bool is_ground_query(const query& q) {
    for (const auto& disjunct : q.disjuncts)
        for (const atom& a : disjunct)
            if (!is_ground(a)) return false;
    return true;
}

// --- construction -----------------------------------------------------------

static atom rename_var_in_atom(const atom& a, const std::string& from, const std::string& to) {
    atom out = a;
    for (term& t : out.args) {
        if (t.is_var() && t.name == from) {
            t.name = to;
        } else if (t.is_func()) {
            for (term& sub : t.args)
                if (sub.is_var() && sub.name == from) sub.name = to;
        }
    }
    return out;
}

rule make_rule(std::vector<atom> body, std::vector<head_conjunct> head) {
    rule r;
    r.body = sorted_atom_set(std::move(body));
    std::set<std::string> bvars = vars_of(r.body);

    std::set<std::string> taken = bvars;
    for (const head_conjunct& c : head) {
        taken.insert(c.existentials.begin(), c.existentials.end());
        auto hv = vars_of(c.atoms);
        taken.insert(hv.begin(), hv.end());
    }

    for (head_conjunct& c : head) {
        // An existential shadowing a body variable binds the occurrences in
        // its own conjunct; give it a fresh name to keep namespaces disjoint.
        for (std::string& e : c.existentials) {
            if (!bvars.count(e)) continue;
            std::string fresh;
            for (int k = 1;; ++k) {
                fresh = e + "_s" + std::to_string(k);
                if (!taken.count(fresh)) break;
            }
            taken.insert(fresh);
            for (atom& a : c.atoms) a = rename_var_in_atom(a, e, fresh);
            e = fresh;
        }
        c.atoms = sorted_atom_set(std::move(c.atoms));
        std::set<std::string> used = vars_of(c.atoms);
        std::vector<std::string> kept;
        for (const std::string& e : c.existentials)
            if (used.count(e)) kept.push_back(e);
        c.existentials = std::move(kept);
    }

    for (const head_conjunct& c : head) {
        if (std::find(r.head.begin(), r.head.end(), c) == r.head.end()) r.head.push_back(c);
    }
    return r;
}

// --- structural predicates ---------------------------------------------------

guard_info is_guarded(const rule& r) {
    guard_info g;
    std::set<std::string> bv = body_vars(r);
    for (const atom& a : r.body) {
        std::set<std::string> av = vars_of(a);
        if (std::includes(av.begin(), av.end(), bv.begin(), bv.end())) g.guards.push_back(a);
    }
    g.guarded = !g.guards.empty() || bv.empty();
    return g;
}

bool is_full(const rule& r) {
    if (!is_function_free(r.body)) return false;
    for (const head_conjunct& c : r.head) {
        if (!c.existentials.empty()) return false;
        if (!is_function_free(c.atoms)) return false;
    }
    return true;
}

rule_widths widths(const rule& r) {
    rule_widths w;
    w.bwidth = body_vars(r).size();
    for (const head_conjunct& c : r.head) w.hwidth = std::max(w.hwidth, vars_of(c.atoms).size());
    w.width = std::max(w.bwidth, w.hwidth);
    return w;
}

rule_widths widths(const std::vector<rule>& rules) {
    rule_widths w;
    for (const rule& r : rules) {
        rule_widths rw = widths(r);
        w.bwidth = std::max(w.bwidth, rw.bwidth);
        w.hwidth = std::max(w.hwidth, rw.hwidth);
        w.width = std::max(w.width, rw.width);
    }
    return w;
}

std::set<std::string> exported_vars(const rule& r, std::size_t conjunct_index) {
    if (conjunct_index >= r.head.size())
        throw std::out_of_range("exported_vars: conjunct index out of range");
    std::set<std::string> bv = body_vars(r);
    std::set<std::string> hv = vars_of(r.head[conjunct_index].atoms);
    std::set<std::string> out;
    for (const std::string& v : hv)
        if (bv.count(v)) out.insert(v);
    return out;
}

bool is_tgd(const rule& r) {
    if (r.head.size() != 1) return false;
    if (!is_function_free(r.body)) return false;
    return is_function_free(r.head[0].atoms);
}

bool is_disjunctive(const rule& r) { return r.head.size() > 1; }

bool is_functional(const atom& a) { return !is_function_free(a); }

bool has_functional_atom(const std::vector<atom>& atoms) {
    for (const atom& a : atoms)
        if (is_functional(a)) return true;
    return false;
}

std::string guarded_simple_violation(const rule& r) {
    std::set<std::string> av = all_vars(r);
    bool has_guard = false;
    std::set<std::string> bv = body_vars(r);
    for (const atom& a : r.body) {
        if (!is_function_free(a)) continue;
        std::set<std::string> v = vars_of(a);
        if (std::includes(v.begin(), v.end(), bv.begin(), bv.end())) has_guard = true;
    }
    if (!has_guard && !bv.empty()) return "no function-free guard in body";

    auto check_atoms = [&](const std::vector<atom>& atoms) -> std::string {
        for (const atom& a : atoms) {
            if (has_nested_function(a)) return "nested function in " + print_atom(a);
            for (const term& t : a.args) {
                if (!t.is_func()) continue;
                std::set<std::string> fv;
                for (const term& arg : t.args) {
                    if (arg.is_const()) return "constant inside function term in " + print_atom(a);
                    fv.insert(arg.name);
                }
                if (fv != av) return "functional term missing rule variables in " + print_atom(a);
            }
        }
        return "";
    };
    if (auto e = check_atoms(r.body); !e.empty()) return e;
    for (const head_conjunct& c : r.head) {
        if (!c.existentials.empty()) return "existential in Skolemized rule";
        if (auto e = check_atoms(c.atoms); !e.empty()) return e;
    }
    return "";
}

std::string rule_violation(const rule& r) {
    std::set<std::string> bv = body_vars(r);
    for (std::size_t i = 0; i < r.head.size(); ++i) {
        const head_conjunct& c = r.head[i];
        std::set<std::string> allowed = bv;
        allowed.insert(c.existentials.begin(), c.existentials.end());
        for (const std::string& v : vars_of(c.atoms)) {
            if (!allowed.count(v))
                return "unbound variable " + v + " in head conjunct " + std::to_string(i + 1);
        }
        for (const std::string& e : c.existentials)
            if (bv.count(e)) return "existential " + e + " also occurs in the body";
    }
    return "";
}

// --- printing ----------------------------------------------------------------

std::string print_term(const term& t) {
    if (!t.is_func()) return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ",";
        out += print_term(t.args[i]);
    }
    return out + ")";
}

std::string print_atom(const atom& a) {
    if (a.args.empty()) return a.pred;
    std::string out = a.pred + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += print_term(a.args[i]);
    }
    return out + ")";
}

std::string print_atom_list(const std::vector<atom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ", ";
        out += print_atom(atoms[i]);
    }
    return out;
}

std::string print_conjunct(const head_conjunct& c) {
    std::string out;
    if (!c.existentials.empty()) {
        out += "exists ";
        for (std::size_t i = 0; i < c.existentials.size(); ++i) {
            if (i) out += ", ";
            out += c.existentials[i];
        }
        out += ". ";
    }
    out += print_atom_list(c.atoms);
    return out;
}

std::string print_rule(const rule& r) {
    std::string out = print_atom_list(r.body) + " -> ";
    for (std::size_t i = 0; i < r.head.size(); ++i) {
        if (i) out += " | ";
        out += print_conjunct(r.head[i]);
    }
    return out + ".";
}

std::string print_fact(const fact& f) { return print_atom(f) + "."; }

std::string print_query(const query& q) {
    std::string out = "? ";
    for (std::size_t i = 0; i < q.disjuncts.size(); ++i) {
        if (i) out += " | ";
        out += print_atom_list(q.disjuncts[i]);
    }
    return out + ".";
}

std::string print_program(const program& p) {
    std::string out;
    for (const fact& f : p.database) out += print_fact(f) + "\n";
    for (const rule& r : p.rules) out += print_rule(r) + "\n";
    for (const query& q : p.queries) out += print_query(q) + "\n";
    return out;
}

}  // namespace gsat
