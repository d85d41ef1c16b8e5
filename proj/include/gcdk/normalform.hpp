#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gcdk/ast.hpp"

namespace gcdk::normalform {

// The normal-form skeleton
//
//   forall x alpha
//     /\  AND_j forall x forall y (e_j(x,y) -> (beta_j \/ x = y))
//     /\  AND_i forall x exists_{=C_i} y (o_i(x,y) /\ x != y)
//
// with alpha a quantifier- and equality-free one-variable formula, beta_j
// quantifier- and equality-free, and every C_i >= 1. Both lists are nonempty:
// degenerate inputs are padded with a trivial universal or counter.
struct NormalForm {
  frontend::F alpha;
  std::vector<std::pair<int, frontend::F>> universals;  // (e_j, beta_j)
  std::vector<std::pair<int, uint64_t>> counters;       // (o_i, C_i)

  uint64_t max_count() const;
  std::vector<uint64_t> count_vector() const;

  // The sentence the skeleton denotes, rebuilt over the extended signature.
  frontend::F to_formula() const;
};

// Rewrites a closed formula (post-splitting: no ground atoms, no embedded
// dependency atoms) into the skeleton above over an extended signature.
// Every model of the result, restricted to the input signature, satisfies
// phi. Conversely any model of phi of size at least max(2, max_count() + 1)
// expands to a model of the result, so satisfiability, finite
// satisfiability, and per-size satisfiability above that threshold are
// preserved. Throws std::invalid_argument on inputs outside the fragment
// (free variables, two free variables under a plain quantifier, or a
// disjunction of two universally quantified sentences, which no skeleton of
// this shape can express).
std::pair<NormalForm, frontend::Signature> to_normal_form(
    const frontend::F& phi, frontend::Signature sig);

// For each key predicate f: forall x ~f(x,x); forall x exists_{=1} y
// (f(x,y) /\ x != y); both implications between f(x,y) and f_inv(y,x).
// True when the signature declares no keys.
frontend::F key_axioms(const frontend::Signature& sig);

// Adds one naming predicate per constant (same name as the constant) plus
// spare_predicate_count(m, C) spare unary predicates to the signature, and
// all naming formulas c(c) and ~c(d) for distinct constants c, d to the
// database.
std::pair<frontend::Database, frontend::Signature> prepare_database(
    frontend::Database db, frontend::Signature sig, uint64_t m, uint64_t C);

// ceil(log2((m*C)^2 + 1))
int spare_predicate_count(uint64_t m, uint64_t C);

}  // namespace gcdk::normalform
