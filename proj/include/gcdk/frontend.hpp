#pragma once

#include <string>
#include <vector>

#include "gcdk/ast.hpp"

namespace gcdk::frontend {

// Parses a full problem file (sig / phi / db / pfd blocks). Converse
// predicates are auto-declared for every key. Throws ParseError.
Problem parse_problem(const std::string& text);

// Deterministic concrete syntax; output reparses to an equal Problem.
std::string print_problem(const Problem& p);
std::string print_formula(const Signature& sig, const F& f);

// Checks Formula/Database/Pfd invariants and database consistency.
// Throws ValidationError listing every violated invariant.
void validate_problem(const Problem& p);

// Case split over the ground atoms and PFD atoms embedded in psi: one
// output Problem per truth assignment (2^(g+k) in total). PFDs mapped
// true join K; PFDs mapped false contribute fresh-constant violation
// witnesses to the database; ground atoms join the database with the
// assigned polarity. The disjunction of outputs is equisatisfiable
// with psi and db.
std::vector<Problem> split_standard_form(const F& psi, const Database& db,
                                         const Signature& sig);

}  // namespace gcdk::frontend
