#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gcdk/ast.hpp"
#include "gcdk/pfd_binary.hpp"

namespace gcdk::semantics {

// An explicit finite structure over a signature. Elements are 0..n-1.
// Constants are interpreted injectively (unique names assumption).
struct Structure {
  int n = 0;
  std::vector<int> const_map;             // constant id -> element
  std::vector<std::vector<char>> un;      // [unary][elem]
  std::vector<std::vector<char>> bin;     // [binary][a*n + b]

  Structure() = default;
  Structure(const frontend::Signature& sig, int n);

  bool u(int p, int e) const { return un[p][e] != 0; }
  bool b(int p, int e, int f) const { return bin[p][(size_t)e * n + f] != 0; }
  void set_u(int p, int e, bool v) { un[p][e] = v; }
  void set_b(int p, int e, int f, bool v) { bin[p][(size_t)e * n + f] = v; }

  // Elements interpreting some constant.
  std::vector<char> active_mask() const;
};

// Truth of a formula; free variables (if any) must be covered by xv/yv.
// Pass -1 for an unbound variable.
bool evaluate_at(const frontend::Signature& sig, const Structure& A,
                 const frontend::F& f, int xv, int yv);
bool evaluate(const frontend::Signature& sig, const Structure& A,
              const frontend::F& f);

// The element reached from start by reading word as a chain of steps, taking
// at each step the first element related to the current one. nullopt if some
// step has no successor.
std::optional<int> path_image(const frontend::Signature& sig,
                              const Structure& A, const std::vector<int>& word,
                              int start);

// A violating pair for the dependency, or nullopt if none.
std::optional<std::pair<int, int>> check_pfd(const frontend::Signature& sig,
                                             const Structure& A,
                                             const frontend::Pfd& kappa);

// ---------------------------------------------------------------------------
// The graph of a structure: predicate edges plus a clique on the active
// elements, undirected, no self-loops.

struct Graph {
  int n = 0;
  std::vector<char> adj;      // n*n, symmetric
  std::vector<char> active;   // per element

  bool edge(int a, int b) const { return adj[(size_t)a * n + b] != 0; }
};

Graph graph_of(const frontend::Signature& sig, const Structure& A);

// True iff every cycle of length <= ell consists of active elements only.
bool is_quasi_acyclic(const Graph& g, int ell);

// ---------------------------------------------------------------------------
// Walks and tours

struct Route {
  std::vector<int> elems;  // walk: |word|+1 elements; tour: |word| elements
  std::vector<int> word;   // graph predicate ids
  bool tour = false;
  int start = -1;          // tours carry an explicit start (= elems[0] if any)
};

enum class Activity : uint8_t { Active, Passive, Mixed };

bool route_holds(const frontend::Signature& sig, const Structure& A,
                 const Route& r);
Activity classify(const Structure& A, const Route& r);

enum class TourFilter : uint8_t { None, FirstThreeDistinct, AllActive, AllPassive };

// All word-tours in A, optionally filtered. Elements may repeat.
std::vector<Route> find_r_tours(const frontend::Signature& sig,
                                const Structure& A, const std::vector<int>& word,
                                TourFilter filter);

// The spine of a walk: repeatedly jump to the last departure from the
// current element. For acyclic walks this yields a path with the same
// endpoints whose letters are drawn from the walk.
Route spine(const Route& walk);

// Distinct undirected step edges of a walk or tour.
std::vector<std::pair<int, int>> locus(const Route& r);

// True iff the locus is a forest.
bool route_acyclic(const Route& r);

// ---------------------------------------------------------------------------
// Derived predicates

// Returns A extended with the unique interpretation of the fan/branch/isth
// predicates of `derived` satisfying their defining biconditionals. A must
// already have rows for the derived predicate ids.
Structure annotate_derived(const frontend::Signature& sig, const Structure& A,
                           const pfd_binary::DerivedSignature& derived);

// ---------------------------------------------------------------------------
// Brute-force oracle

// Exhaustive model search over domains of size 1..n_max: constants pinned to
// the first elements, key predicates enumerated as total irreflexive
// functions with mirrored converses, remaining extensions enumerated with
// non-constant elements restricted to sorted unary profiles. Checks phi, the
// database, and every dependency in p.pfds. Throws ResourceError after
// `budget` candidate structures.
std::optional<Structure> brute_force_search(const frontend::Problem& p,
                                            int n_max,
                                            uint64_t budget = 1ull << 26);

}  // namespace gcdk::semantics
