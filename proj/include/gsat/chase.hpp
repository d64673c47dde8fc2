#pragma once

// Bounded chase and disjunctive-chase engines with provenance: tree
// decomposition bags for guarded runs and full chase trees for disjunctive
// rules. Serves as the brute-force oracle behind every saturation check and
// as a standalone prover for existential queries.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsat/model.hpp"
#include "gsat/unify.hpp"

namespace gsat {

enum class chase_mode { oblivious, restricted };

struct chase_step {
    int rule_index = -1;
    std::map<std::string, std::string> trigger;  // body variable -> constant
    std::vector<fact> new_facts;
    int fired_node = -1;                // node whose bag held the trigger image
    std::vector<int> touched_nodes;     // nodes whose bags grew at this step
};

struct chase_node {
    int id = 0;
    int parent = -1;
    int created_step = -1;              // -1 for the root
    std::vector<fact> birth_facts;
    std::vector<fact> bag;
};

struct chase_run {
    std::vector<chase_step> steps;
    std::vector<chase_node> nodes;      // empty unless provenance was kept
    bool has_provenance = false;
    instance final_instance;
    bool exhausted = false;             // budget hit before quiescence
    bool fixpoint = false;              // no (active) triggers left
};

// Fires (rule, trigger) pairs fairly in FIFO discovery order. Restricted
// mode fires only active triggers; oblivious mode fires each trigger once.
// Fresh constants are named _eK. Node/bag provenance is maintained when
// every rule is guarded. Throws on budget <= 0 or disjunctive rules.
chase_run chase(const instance& db, const std::vector<rule>& rules, chase_mode mode,
                int budget);

enum class certainty { yes, refuted_at_fixpoint, unknown };

struct chase_answer {
    certainty result = certainty::unknown;
    int steps_used = 0;                 // firings until the query held (yes only)
    chase_run run;
};

// Yes iff some chase prefix within budget satisfies q (query variables are
// existential). Restricted mode reports refuted_at_fixpoint when the chase
// reaches a fixpoint without satisfying q; otherwise unknown.
chase_answer chase_certain(const instance& db, const std::vector<rule>& rules, const query& q,
                           int budget, chase_mode mode = chase_mode::restricted);

struct tree_node {
    int id = 0;
    int parent = -1;
    int depth = 0;
    int rule_index = -1;                // rule fired at the parent to create this
    int conjunct_index = -1;
    instance facts;
    bool satisfied = false;
    bool quiescent = false;             // no unfired triggers left
};

struct chase_tree {
    std::vector<tree_node> nodes;
    std::vector<int> leaves;
};

enum class tree_result { proven, unknown_at_fixpoint, unknown };

struct disjunctive_answer {
    tree_result result = tree_result::unknown;
    chase_tree tree;                    // witness when proven
};

// Explores disjunctive chase trees breadth-first (shallowest unsatisfied
// leaf first); a branch satisfying q is not expanded further. Proven when a
// finite tree is reached in which every leaf satisfies q;
// unknown_at_fixpoint when the tree is fully expanded and some leaf still
// fails q (a definitive no); unknown when the node budget runs out.
disjunctive_answer disjunctive_chase(const instance& db, const std::vector<rule>& rules,
                                     const query& q, int node_budget);

struct one_pass_violation {
    int node = -1;
    int departing_step = -1;  // step fired outside the node's subtree
    int modifying_step = -1;  // later step that modified the subtree
};

struct one_pass_report {
    bool one_pass = true;
    std::optional<one_pass_violation> violation;
};

// True iff once any step fires outside the subtree of a node, no later step
// modifies that subtree. Requires provenance.
one_pass_report check_one_pass(const chase_run& run);

// True iff some disjunct of q matches into I, mapping query variables to
// constants of I.
bool satisfies(const instance& I, const query& q);

// Trace export; formats documented in docs/trace-formats.md.
std::string run_to_json(const chase_run& run);
std::string run_to_dot(const chase_run& run);
std::string tree_to_json(const chase_tree& tree);
std::string tree_to_dot(const chase_tree& tree);

}  // namespace gsat
