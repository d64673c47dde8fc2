#pragma once

// Query answering over rewritten full programs: a bottom-up Datalog
// fixpoint for full TGDs, and Herbrand grounding plus propositional
// resolution for full disjunctive programs.

#include <cstdint>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

struct datalog_result {
    instance facts;
    std::uint64_t firings = 0;
    std::uint64_t work_units = 0;  // atom match attempts; scaling smoke checks use this
};

// Least fixpoint of the full, function-free rules over the database.
// Throws on non-full or disjunctive rules.
datalog_result datalog_eval(const instance& db, const std::vector<rule>& rules);

// True iff all atoms of some disjunct appear in the instance. The query
// must be ground.
bool answer_ucq(const instance& I, const query& q);

// Grounds database, rules, and the negated query into propositional
// clauses over the database constants and decides entailment by resolution
// closure with tautology elimination and forward subsumption. Rules must be
// full; disjunctive rules must be single-headed (conjunctive heads of plain
// TGDs are split). The query must be ground.
bool disdatalog_entails(const instance& db, const std::vector<rule>& rules, const query& q);

}  // namespace gsat
