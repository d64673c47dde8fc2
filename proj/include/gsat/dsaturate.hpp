#pragma once

// Disjunctive guarded saturation over Skolemized single-headed guarded
// simple rules: SHNF -> Skolemize -> VNF -> close under D-EVOLVE -> keep
// the immediate full consequences.

#include <vector>

#include "gsat/model.hpp"
#include "gsat/normal_forms.hpp"
#include "gsat/saturate.hpp"

namespace gsat {

// A single-headed guarded simple rule: the head is a set of single-atom
// disjuncts with no existentials (Skolem terms carry the witnesses).
struct gsrule {
    std::vector<atom> body;  // sorted, deduplicated
    std::vector<atom> head;  // sorted, deduplicated disjunct set

    friend bool operator==(const gsrule&, const gsrule&) = default;
};

gsrule to_gsrule(const rule& r);     // requires single-atom, existential-free conjuncts
rule to_rule(const gsrule& r);       // one conjunct per head atom
std::string print_gsrule(const gsrule& r);

bool gs_full(const gsrule& r);       // entirely function-free
bool gs_nonfull(const gsrule& r);    // function-free body, some functional head atom
gsrule gs_vnf(const gsrule& r);

// One D-EVOLVE inference family: resolves a functional head atom of the
// non-full premise against a guard of a full rule or a functional body atom
// of any rule.
std::vector<gsrule> devolve_step(const gsrule& nonfull, const gsrule& other);

struct dgsat_result {
    std::vector<rule> rules;                 // full single-headed DisTGDs, sorted
    std::vector<std::string> fresh_predicates;  // SHNF-introduced names
    skolem_table skolems;
    saturation_stats stats;
};

// Full pipeline; input must be guarded DisTGDs.
dgsat_result dgsat(const std::vector<rule>& rules, saturation_options opts = {});

void require_disgtgds(const std::vector<rule>& rules);

}  // namespace gsat
