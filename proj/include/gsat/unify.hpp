#pragma once

// Substitutions, renamings, composition, and most-general unification over
// shallow terms, with support for frozen variables (treated as constants).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

// Finite map from variable names to terms; identity outside its domain.
struct subst {
    std::map<std::string, term> map;

    bool empty() const { return map.empty(); }
    const term* lookup(const std::string& v) const {
        auto it = map.find(v);
        return it == map.end() ? nullptr : &it->second;
    }

    friend bool operator==(const subst&, const subst&) = default;
};

term apply(const subst& s, const term& t);
atom apply(const subst& s, const atom& a);
std::vector<atom> apply(const subst& s, const std::vector<atom>& atoms);  // re-deduplicated

// Applies to body and head atoms; binder names follow variable renamings.
// Throws if a binder would be mapped to a non-variable term.
rule apply(const subst& s, const rule& r);

// apply(compose(s1, s2), t) == apply(s2, apply(s1, t)).
subst compose(const subst& s1, const subst& s2);

bool is_renaming(const subst& s);
subst inverse_renaming(const subst& s);  // requires is_renaming

// Most general unifier of the atom pairs, identity on `frozen` variables.
// Nested function terms in the input are rejected (std::invalid_argument);
// a unifier whose images would not be shallow cannot occur in this pipeline
// and raises std::domain_error.
std::optional<subst> mgu(const std::vector<std::pair<atom, atom>>& pairs,
                         const std::set<std::string>& frozen = {});

struct renamed_pair {
    rule first;
    rule second;
    subst renaming;  // the renaming applied to `second`
};

// Renames the variables of r2 apart from those of r1 (suffix "_r" names).
// With keep_existentials set, r2's binders are left untouched.
renamed_pair rename_apart(const rule& r1, const rule& r2, bool keep_existentials = false);

}  // namespace gsat
