#pragma once

#include <vector>

#include "gcdk/ast.hpp"

namespace gcdk::pfd_unary {

// Result of compiling unary path-functional dependencies away: the original
// formula conjoined with the path-predicate axioms and one no-critical-
// violation sentence per dependency, over a signature extended with one
// fresh path predicate per distinct proper prefix.
struct UnaryElimResult {
  frontend::F phi;
  frontend::Signature sig;
};

// Smallest prefix-closed superset, the trivially valid empty dependency
// omitted. Output is sorted and duplicate-free. Throws std::invalid_argument
// if a binary dependency is passed.
std::vector<frontend::Pfd> prefix_close(std::vector<frontend::Pfd> k1);

// Two-variable equivalent of the three-variable pattern
//
//   free_var = VarX:  phi1(x) = Ey Ez ( dst(x,y,z) & alpha(x,y) & beta(y,z) )
//   free_var = VarY:  phi2(y) = Ex Ez ( dst(x,y,z) & alpha(x,y) & beta(y,z) )
//
// where dst says the three are pairwise distinct. beta is passed with z
// renamed to x, the only spelling a two-variable syntax allows. alpha and
// beta must each contain an atomic binary conjunct over distinct variables;
// it becomes the counting guard. Throws std::invalid_argument otherwise.
frontend::F rewrite_three_var(const frontend::F& alpha,
                              const frontend::F& beta, int free_var);

// phi' such that phi' with a database is satisfiable over a given domain iff
// phi with the same database and the dependencies k1 is. k1 must be
// prefix-closed (throws std::invalid_argument otherwise).
UnaryElimResult eliminate_unary(const frontend::F& phi,
                                const frontend::Database& db,
                                const std::vector<frontend::Pfd>& k1,
                                frontend::Signature sig);

}  // namespace gcdk::pfd_unary
