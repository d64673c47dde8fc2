#include "gsat/unify.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsat {

term apply(const subst& s, const term& t) {
    if (t.is_var()) {
        if (const term* img = s.lookup(t.name)) return *img;
        return t;
    }
    if (t.is_const()) return t;
    term out = t;
    for (term& arg : out.args) {
        if (arg.is_var()) {
            if (const term* img = s.lookup(arg.name)) {
                if (img->is_func())
                    throw std::domain_error("substitution image not shallow under " +
                                            print_term(t));
                arg = *img;
            }
        }
    }
    return out;
}

atom apply(const subst& s, const atom& a) {
    atom out = a;
    for (term& t : out.args) t = apply(s, t);
    return out;
}

std::vector<atom> apply(const subst& s, const std::vector<atom>& atoms) {
    std::vector<atom> out;
    out.reserve(atoms.size());
    for (const atom& a : atoms) out.push_back(apply(s, a));
    return sorted_atom_set(std::move(out));
}

rule apply(const subst& s, const rule& r) {
    std::vector<atom> body = gsat::apply(s, r.body);
    std::vector<head_conjunct> head;
    for (const head_conjunct& c : r.head) {
        head_conjunct nc;
        for (const std::string& e : c.existentials) {
            if (const term* img = s.lookup(e)) {
                if (!img->is_var())
                    throw std::invalid_argument("binder " + e + " mapped to a non-variable");
                nc.existentials.push_back(img->name);
            } else {
                nc.existentials.push_back(e);
            }
        }
        nc.atoms = gsat::apply(s, c.atoms);
        head.push_back(std::move(nc));
    }
    rule out;
    out.body = std::move(body);
    for (const head_conjunct& c : head) {
        if (std::find(out.head.begin(), out.head.end(), c) == out.head.end())
            out.head.push_back(c);
    }
    return out;
}

subst compose(const subst& s1, const subst& s2) {
    subst out;
    for (const auto& [v, t] : s1.map) {
        term img = apply(s2, t);
        if (!(img.is_var() && img.name == v)) out.map.emplace(v, std::move(img));
    }
    for (const auto& [v, t] : s2.map) {
        if (!s1.map.count(v) && !(t.is_var() && t.name == v)) out.map.emplace(v, t);
    }
    return out;
}

bool is_renaming(const subst& s) {
    std::set<std::string> images;
    for (const auto& [v, t] : s.map) {
        if (!t.is_var()) return false;
        if (!images.insert(t.name).second) return false;
    }
    return true;
}

subst inverse_renaming(const subst& s) {
    if (!is_renaming(s)) throw std::invalid_argument("inverse of a non-renaming");
    subst out;
    for (const auto& [v, t] : s.map) out.map.emplace(t.name, term::var(v));
    return out;
}

namespace {

constexpr const char* frozen_prefix = "~fz~";

term freeze_term(const term& t, const std::set<std::string>& frozen) {
    if (t.is_var() && frozen.count(t.name)) return term::cst(frozen_prefix + t.name);
    if (t.is_func()) {
        term out = t;
        for (term& a : out.args) a = freeze_term(a, frozen);
        return out;
    }
    return t;
}

term thaw_term(const term& t) {
    if (t.is_const() && t.name.rfind(frozen_prefix, 0) == 0)
        return term::var(t.name.substr(4));
    if (t.is_func()) {
        term out = t;
        for (term& a : out.args) a = thaw_term(a);
        return out;
    }
    return t;
}

// Iterative solved-form computation over shallow terms. Bindings map a
// variable to a shallow term; chains are resolved lazily with an occurs
// check through the binding graph.
struct unifier_state {
    std::map<std::string, term> bind;

    const term& walk(const term& t) const {
        const term* cur = &t;
        while (cur->is_var()) {
            auto it = bind.find(cur->name);
            if (it == bind.end()) break;
            cur = &it->second;
        }
        return *cur;
    }

    bool occurs(const std::string& v, const term& t, std::set<std::string>& visiting) const {
        const term& w = walk(t);
        if (w.is_var()) return w.name == v;
        if (w.is_const()) return false;
        for (const term& a : w.args) {
            if (a.is_var() && !visiting.insert(a.name).second) continue;
            if (occurs(v, a, visiting)) return true;
        }
        return false;
    }

    bool unify(const term& a, const term& b) {
        const term ta = walk(a);
        const term tb = walk(b);
        if (ta.is_var() && tb.is_var() && ta.name == tb.name) return true;
        if (ta.is_var()) return bind_var(ta.name, tb);
        if (tb.is_var()) return bind_var(tb.name, ta);
        if (ta.is_const() || tb.is_const())
            return ta.is_const() && tb.is_const() && ta.name == tb.name;
        if (ta.name != tb.name || ta.args.size() != tb.args.size()) return false;
        for (std::size_t i = 0; i < ta.args.size(); ++i)
            if (!unify(ta.args[i], tb.args[i])) return false;
        return true;
    }

    bool bind_var(const std::string& v, const term& t) {
        std::set<std::string> visiting;
        if (t.is_func() && occurs(v, t, visiting)) return false;
        bind.emplace(v, t);
        return true;
    }

    term resolve(const term& t, bool inside_func) const {
        const term& w = walk(t);
        if (!w.is_func()) return w;
        if (inside_func) throw std::domain_error("unifier image not shallow");
        term out = w;
        for (term& a : out.args) a = resolve(a, true);
        return out;
    }
};

}  // namespace

std::optional<subst> mgu(const std::vector<std::pair<atom, atom>>& pairs,
                         const std::set<std::string>& frozen) {
    unifier_state st;
    for (const auto& [a, b] : pairs) {
        if (has_nested_function(a) || has_nested_function(b))
            throw std::invalid_argument("mgu: nested function terms are not supported");
        if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            term ta = freeze_term(a.args[i], frozen);
            term tb = freeze_term(b.args[i], frozen);
            if (!st.unify(ta, tb)) return std::nullopt;
        }
    }
    subst out;
    for (const auto& [v, t] : st.bind) {
        (void)t;
        term img = thaw_term(st.resolve(term::var(v), false));
        if (!(img.is_var() && img.name == v)) out.map.emplace(v, std::move(img));
    }
    return out;
}

renamed_pair rename_apart(const rule& r1, const rule& r2, bool keep_existentials) {
    std::set<std::string> r1_vars = all_vars(r1);
    for (const head_conjunct& c : r1.head)
        r1_vars.insert(c.existentials.begin(), c.existentials.end());

    std::set<std::string> taken = r1_vars;
    std::set<std::string> r2_vars = all_vars(r2);
    std::set<std::string> r2_existentials;
    for (const head_conjunct& c : r2.head)
        r2_existentials.insert(c.existentials.begin(), c.existentials.end());
    r2_vars.insert(r2_existentials.begin(), r2_existentials.end());

    subst rho;
    for (const std::string& v : r2_vars) {
        if (keep_existentials && r2_existentials.count(v)) continue;
        if (!r1_vars.count(v)) continue;
        std::string fresh = v + "_r";
        for (int k = 2; taken.count(fresh) || r2_vars.count(fresh); ++k)
            fresh = v + "_r" + std::to_string(k);
        taken.insert(fresh);
        rho.map.emplace(v, term::var(fresh));
    }
    return {r1, gsat::apply(rho, r2), rho};
}

}  // namespace gsat
