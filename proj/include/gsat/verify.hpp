#pragma once

// Oracle cross-checks: per-rule soundness via frozen-body chase, bounded
// completeness of the rewriting + eval pipeline against the chase, SSat and
// GSat agreement, and a brute-force world-enumeration check for the
// propositional path.

#include <cstdint>
#include <string>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

struct verify_options {
    int chase_budget = 10000;       // steps for the plain chase
    int node_budget = 5000;         // nodes for the disjunctive chase
    bool inject_unsound = false;    // negative control: corrupt the rewriting
    bool check_ssat = true;         // also validate the simple saturation
};

struct verify_report {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::uint64_t shape_violations = 0;
    std::uint64_t ceiling_hits = 0;
    std::vector<std::string> failure_lines;

    bool ok() const { return failures == 0; }
    void merge(const verify_report& other);
};

// Cross-checks one GTGD program end to end.
verify_report verify_gtgd_program(const program& p, const verify_options& opts);

// Cross-checks one DisGTGD program end to end.
verify_report verify_disgtgd_program(const program& p, const verify_options& opts);

// Dispatches on the rule class.
verify_report verify_program(const program& p, const verify_options& opts);

// Seeded random suite of `count` programs ("gtgd" or "disgtgd").
verify_report verify_random_suite(const std::string& rule_class, std::uint32_t count,
                                  std::uint64_t seed, const verify_options& opts);

// Exhaustive 2^k possible-world check of D, Sigma |= Q for full
// single-headed disjunctive programs; the independent oracle behind the
// propositional resolution path. Ground-atom count must stay small.
bool worlds_entail(const instance& db, const std::vector<rule>& rules, const query& q);

}  // namespace gsat
