#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gcdk/ast.hpp"

namespace gcdk::pfd_binary {

// A word over the graph predicates (key predicates and their converses),
// stored as binary predicate ids in application order: word[0] is applied
// first when the word is read as a composite function.
using Word = std::vector<int>;

std::vector<frontend::Pfd> left_prefix_close(const std::vector<frontend::Pfd>& k2);

// r = f f~ reverse(fbar)~ g ... for kappa = P[fbar f, gbar]; see rotated_word.
Word rotated_word(const frontend::Pfd& kappa, const frontend::Signature& sig);

Word word_inverse(const Word& w, const frontend::Signature& sig);

// Identifies one branch predicate instance. `which` selects the variable the
// predicate describes: 1 = the start of the two f-edges (a0 in a violating
// tour), 2 = their shared target (a1). The remaining fields are the letters
// and fan words the defining biconditional mentions:
//   which=1 at x:  Ey Ez distinct . g(x,y) & t2(y,x) & fan_wo(y)
//                                 & g(z,y) & t1(z,y) & fan_wz(z)
//   which=2 at y:  Ex Ez distinct . g(x,y) & t2(y,x) & fan_wo(x)
//                                 & g(z,y) & t1(z,y) & fan_wz(z)
// wz always names the word hanging at the t1-witness z.
struct BranchKey {
  int which = 1;
  int g = -1, t1 = -1, t2 = -1;
  Word wz, wo;
  auto operator<=>(const BranchKey&) const = default;
};

// Isthmus predicate instance: start of a suffix-walk out to an element
// satisfying `inner`, paired with a prefix-walk back.
struct IsthKey {
  Word suffix;     // remaining outgoing word
  int inner = -1;  // unary predicate id satisfied at the far end
  Word prefix;     // remaining return word
  auto operator<=>(const IsthKey&) const = default;
};

// Fork predicate instance: "at least two distinct pendant witnesses". With f
// the first letter of the rotated word,
//   out=false at x:  E>=2 y . y != x & f(y,x) & letter(y,x) & fan_fanw(y)
//   out=true  at x:  E>=2 y . y != x & letter(x,y) & f(y,x) & fan_fanw(y)
struct ForkKey {
  Word fanw;
  int letter = -1;
  bool out = false;
  auto operator<=>(const ForkKey&) const = default;
};

struct DerivedSignature {
  Word rot;                         // the rotated word of the dependency
  std::map<Word, int> fan;          // sub-word (by content, eps included) -> unary id
  std::map<BranchKey, int> branch;  // instance -> unary id
  std::map<IsthKey, int> isth;      // instance -> unary id
  std::map<ForkKey, int> fork;      // instance -> unary id

  int fan_id(const Word& w) const;
  int branch_id(const BranchKey& k) const;
  int isth_id(const IsthKey& k) const;
  int fork_id(const ForkKey& k) const;
};

// Extends sig with fan/branch/isth predicates for kappa and returns the
// axiom conjunction F & B1 & B2 & I & ~V together with the instance table.
// All returned conjuncts are two-variable and guarded.
std::pair<frontend::F, DerivedSignature> gen_derived_axioms(
    const frontend::Pfd& kappa, frontend::Signature& sig);

// True iff the completed database exhibits one of the violation
// configurations (ii)-(x) for kappa.
bool check_violation_configs(const frontend::Pfd& kappa,
                             const frontend::Database& completed,
                             const DerivedSignature& derived,
                             const frontend::Signature& sig);

// ---------------------------------------------------------------------------
// Completion enumeration

struct CompletionLimits {
  uint64_t max_completions = 1ull << 20;
};

// Enumerates consistent completions of gamma over all predicates of sig
// restricted to its constants. Pruning rules (converse/naming/functionality
// forcing, fan_eps, derived-atom witnesses, spare-bit fixing on constants,
// and monotone config rejection when kappas are supplied) drop only
// candidates that are inconsistent or provably rejected downstream.
class CompletionIter {
 public:
  CompletionIter(frontend::Database gamma, const frontend::Signature& sig,
                 std::vector<std::pair<frontend::Pfd, const DerivedSignature*>>
                     kappas,
                 CompletionLimits limits = {});

  // Next completion, or nullopt when exhausted. Throws ResourceError once
  // more than limits.max_completions databases have been yielded.
  std::optional<frontend::Database> next();

  uint64_t yielded() const { return yielded_; }

 private:
  struct Node;  // DFS frame

  enum class Tri : uint8_t { Open, True, False };

  bool propagate(std::vector<Tri>& v) const;
  bool config_fires(const std::vector<Tri>& v) const;
  frontend::Database assemble(const std::vector<Tri>& v) const;
  int pick_open(const std::vector<Tri>& v) const;

  const frontend::Signature& sig_;
  std::vector<std::pair<frontend::Pfd, const DerivedSignature*>> kappas_;
  CompletionLimits limits_;
  uint64_t yielded_ = 0;

  // Atom indexing: unary atoms first (pred-major over constants), then
  // binary atoms (pred-major over ordered constant pairs).
  size_t n_atoms_ = 0;
  size_t atom_u(int p, int c) const;
  size_t atom_b(int p, int c, int d) const;

  std::vector<Tri> base_;                 // after gamma + initial propagation
  bool dead_ = false;                     // gamma inconsistent or core rejected
  std::vector<std::pair<std::vector<Tri>, int>> stack_;  // (state, branch phase)
};

}  // namespace gcdk::pfd_binary
