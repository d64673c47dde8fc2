#pragma once

// Line-oriented text format for databases, rule sets, and queries.
//
//   program  := (fact | rule | query | comment)*
//   fact     := atom "."
//   rule     := atomlist "->" headconj ("|" headconj)* "."
//   headconj := ["exists" varlist "."] atomlist
//   query    := "?" atomlist ("|" atomlist)* "."
//   comment  := "%" to end-of-line
//
// Identifiers are ASCII alphanumeric plus underscore; an uppercase first
// letter makes a variable, anything else a constant/predicate/function.
// Function terms are only accepted with allow_skolem set. Queries may use
// variables (read existentially); consumers that need quantifier-free
// queries check is_ground_query themselves.

#include <stdexcept>
#include <string>

#include "gsat/model.hpp"

namespace gsat {

struct parse_error : std::runtime_error {
    int line;
    int column;
    parse_error(int l, int c, const std::string& msg)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          column(c) {}
};

struct parse_options {
    bool allow_skolem = false;
};

program parse_program(const std::string& text, parse_options opts = {});

}  // namespace gsat
