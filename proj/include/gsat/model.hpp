#pragma once

// Terms, atoms, facts, instances, rules, queries and the basic structural
// predicates (guardedness, fullness, widths) shared by every other module.
//
// Conventions: variable names start with an uppercase letter, everything
// else (constants, predicates, functions) starts lowercase or underscore.
// All values are immutable-by-convention after construction; operations
// return new values.

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace gsat {

enum class term_kind { constant, variable, func };

// A term is a variable, a constant, or a shallow function application
// (arguments of a function are variables or constants, never functions).
struct term {
    term_kind kind = term_kind::constant;
    std::string name;
    std::vector<term> args;  // nonempty only for kind == func

    static term var(std::string n) { return {term_kind::variable, std::move(n), {}}; }
    static term cst(std::string n) { return {term_kind::constant, std::move(n), {}}; }
    static term fn(std::string n, std::vector<term> a) {
        return {term_kind::func, std::move(n), std::move(a)};
    }

    bool is_var() const { return kind == term_kind::variable; }
    bool is_const() const { return kind == term_kind::constant; }
    bool is_func() const { return kind == term_kind::func; }

    friend bool operator==(const term&, const term&) = default;
    friend std::strong_ordering operator<=>(const term& a, const term& b) {
        if (auto c = a.name <=> b.name; c != 0) return c;
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.args <=> b.args;
    }
};

struct atom {
    std::string pred;
    std::vector<term> args;

    friend bool operator==(const atom&, const atom&) = default;
    friend std::strong_ordering operator<=>(const atom& a, const atom& b) {
        if (auto c = a.pred <=> b.pred; c != 0) return c;
        return a.args <=> b.args;
    }
};

// A fact is a ground atom; an instance is a set of facts.
using fact = atom;
using instance = std::set<fact>;

// One disjunct of a rule head: an existentially quantified conjunction.
// `existentials` keeps binder order (it drives Skolem argument naming);
// `atoms` is a deduplicated set in canonical order.
struct head_conjunct {
    std::vector<std::string> existentials;
    std::vector<atom> atoms;

    friend bool operator==(const head_conjunct&, const head_conjunct&) = default;
    friend auto operator<=>(const head_conjunct&, const head_conjunct&) = default;
};

// Unified representation of TGDs, disjunctive TGDs and Skolemized guarded
// simple rules: a body atom set plus a list of head conjuncts.
struct rule {
    std::vector<atom> body;           // sorted, deduplicated
    std::vector<head_conjunct> head;  // written order, deduplicated

    friend bool operator==(const rule&, const rule&) = default;
};

struct query {
    std::vector<std::vector<atom>> disjuncts;

    friend bool operator==(const query&, const query&) = default;
};

struct program {
    instance database;
    std::vector<rule> rules;
    std::vector<query> queries;

    friend bool operator==(const program&, const program&) = default;
};

// --- construction -----------------------------------------------------------

// Normalizes into set form: sorts and deduplicates the body and every
// conjunct's atoms, drops binder entries that do not occur in the conjunct,
// and deduplicates equal conjuncts. An existential whose name collides with
// a body variable shadows it inside its conjunct and is renamed fresh.
rule make_rule(std::vector<atom> body, std::vector<head_conjunct> head);

std::vector<atom> sorted_atom_set(std::vector<atom> atoms);

// --- variable and constant collectors ---------------------------------------

void collect_vars(const term& t, std::vector<std::string>& out);
void collect_vars(const atom& a, std::vector<std::string>& out);
std::set<std::string> vars_of(const atom& a);
std::set<std::string> vars_of(const std::vector<atom>& atoms);
std::set<std::string> body_vars(const rule& r);
std::set<std::string> all_vars(const rule& r);
std::set<std::string> consts_of(const atom& a);
std::set<std::string> consts_of(const instance& facts);

bool is_ground(const term& t);
bool is_ground(const atom& a);
bool is_function_free(const term& t);
bool is_function_free(const atom& a);
bool is_function_free(const std::vector<atom>& atoms);
bool has_nested_function(const atom& a);
bool is_ground_query(const query& q);

// --- structural predicates ---------------------------------------------------

struct guard_info {
    bool guarded = false;
    std::vector<atom> guards;  // body atoms containing every body variable
};

// True iff some body atom contains every body variable (vacuously true when
// the body has no variables).
guard_info is_guarded(const rule& r);

// True iff no head conjunct has existentials and no function term occurs
// anywhere in the rule.
bool is_full(const rule& r);

struct rule_widths {
    std::size_t bwidth = 0;
    std::size_t hwidth = 0;
    std::size_t width = 0;
};

rule_widths widths(const rule& r);
rule_widths widths(const std::vector<rule>& rules);

// Body variables occurring in the given head conjunct. Throws
// std::out_of_range for a bad index.
std::set<std::string> exported_vars(const rule& r, std::size_t conjunct_index);

bool is_tgd(const rule& r);           // exactly one head conjunct, function-free
bool is_disjunctive(const rule& r);   // more than one head conjunct
bool is_functional(const atom& a);
bool has_functional_atom(const std::vector<atom>& atoms);

// Guarded simple rules: shallow simple atoms, a function-free guard in the
// body, and every functional term containing all variables of the rule and
// no constants. Returns an empty string when the rule conforms, otherwise a
// short description of the first violation.
std::string guarded_simple_violation(const rule& r);

// Head variable occurrences are covered by body variables plus the
// conjunct's existentials; empty string when fine.
std::string rule_violation(const rule& r);

// --- printing ----------------------------------------------------------------

std::string print_term(const term& t);
std::string print_atom(const atom& a);
std::string print_atom_list(const std::vector<atom>& atoms);
std::string print_conjunct(const head_conjunct& c);
std::string print_rule(const rule& r);           // includes the trailing '.'
std::string print_fact(const fact& f);
std::string print_query(const query& q);
std::string print_program(const program& p);

}  // namespace gsat
