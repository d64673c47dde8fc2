#pragma once

// Variable, head, and single-head normal forms, Skolemization and its
// inverse, and immediate full consequences.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

// Renames body variables to X1..Xn by first occurrence (scanning body atoms
// in canonical order, then head conjuncts as written) and each conjunct's
// existentials to Y1..Ym by first occurrence in that conjunct. Linear per
// pass; iterated to a fixpoint so that vnf is idempotent.
rule vnf(const rule& r);
std::vector<rule> vnf(const std::vector<rule>& rules);

// Splits every mixed non-full TGD into its existential and full parts.
// Rules must be TGDs (one head conjunct); anything disjunctive throws.
std::vector<rule> hnf(const std::vector<rule>& rules);

struct shnf_result {
    std::vector<rule> rules;
    std::vector<std::string> fresh_predicates;  // "_shnfK" names introduced
};

// Replaces every rule with a multi-atom head conjunct by one disjunctive
// rule over fresh conjunct predicates plus one projection rule per original
// head atom. Single-headed rules pass through.
shnf_result shnf(const std::vector<rule>& rules);

// (rule index, conjunct index, existential name) -> Skolem function name.
struct skolem_table {
    std::map<std::tuple<std::size_t, std::size_t, std::string>, std::string> fn;
};

struct skolemize_result {
    std::vector<rule> rules;
    skolem_table table;
};

// Replaces each existential of conjunct i by fK_I(x1,..,xn) over all
// universal variables of the rule in VNF order. Requires single-headed
// input (run shnf first).
skolemize_result skolemize(const std::vector<rule>& rules);

// Replaces each distinct functional head term by a fresh per-conjunct
// existential (Y1.. in order of first occurrence). The body must be
// function-free.
rule deskolemize(const rule& r);

// Immediate full consequence: drops existential/functional atoms from each
// head conjunct; nullopt when some conjunct loses all of its atoms. The
// body must be function-free.
std::optional<rule> ifc(const rule& r);

}  // namespace gsat
