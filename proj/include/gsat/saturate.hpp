#pragma once

// The two GTGD rewriting algorithms: simple saturation (all-unifier
// resolution between full rules plus original-rule resolution) and guarded
// saturation (mgu-driven evolve inferences), both producing atomic
// rewritings as sets of full TGDs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

struct unguarded_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when an algorithm is applied to the wrong rule class (for example
// ssat/gsat on a disjunctive rule set).
struct rule_class_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct saturation_options {
    bool subsume = false;          // experimental subsumption-based deletion
    std::size_t max_rules = 500000;  // practical safety cap, not the paper bound
};

struct saturation_stats {
    std::uint64_t pairs_processed = 0;
    std::uint64_t inferences = 0;      // resolvents generated (before dedup)
    std::uint64_t shape_violations = 0;
    std::size_t closure_size = 0;      // rules kept in the saturation state
    std::uint64_t size_ceiling_hits = 0;  // times the theoretical ceiling was exceeded
};

struct saturation_result {
    std::vector<rule> rules;  // sorted by canonical print
    saturation_stats stats;
};

// One composition inference family: all unifiers of a head atom of full1
// with a body atom of full2 whose variable images stay inside
// {X1..X_hwidth_bound}.
std::vector<rule> composition_step(const rule& full1, const rule& full2,
                                   std::size_t hwidth_bound);

// One original inference family: unifiers of head atoms of the non-full
// rule with body atoms of the full rule that are the identity on the
// existentials, map only to variables, and ground the remaining full-rule
// body in the non-full body's image.
std::vector<rule> original_step(const rule& nonfull, const rule& full);

// One evolve inference family on a non-full and a full rule; each result
// is already split into head normal form (up to two rules).
std::vector<rule> evolve_step(const rule& nonfull, const rule& full);

// Closure of the full rules of VNF(HNF(rules)) under composition and
// original steps. Throws std::invalid_argument naming the rule when some
// input is unguarded or disjunctive.
saturation_result ssat(const std::vector<rule>& rules, saturation_options opts = {});

// Closure of VNF(HNF(rules)) under evolve, restricted to its full rules.
saturation_result gsat(const std::vector<rule>& rules, saturation_options opts = {});

// Shared input validation: every rule guarded, single-headed, function-free.
void require_gtgds(const std::vector<rule>& rules);

}  // namespace gsat
