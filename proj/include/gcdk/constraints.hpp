#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gcdk/ast.hpp"
#include "gcdk/normalform.hpp"
#include "gcdk/semantics.hpp"
#include "gcdk/typespace.hpp"

namespace gcdk::constraints {

using typespace::BitStr;
using typespace::Vec;

// ---------------------------------------------------------------------------
// Variables of the counting system
//
//   X   senders of an invertible message type (a = 2-type id)
//   Y   y_{pi,s,u}: elements of 1-type pi whose spectrum at s equals u
//   Z   z_{pi,t,u}: tally analogue over the non-invertible message list
//   YH  yhat_{pi,s,v,w}: elements with spectrum v at s0 and w at s1
//   ZH  zhat analogue
//
// Y/Z carry the address at the top of their identity chain (see Trie); YH/ZH
// carry the branch address their split happens at.
struct VarId {
  enum Kind : uint8_t { X, Y, Z, YH, ZH };
  Kind kind = Kind::X;
  int a = -1;   // X: 2-type id; otherwise 1-type id
  BitStr s;
  Vec u, v;     // Y/Z: value in u; YH/ZH: left in u, right in v

  auto operator<=>(const VarId&) const = default;
};

// ---------------------------------------------------------------------------
// Sparse linear system over nonnegative integer unknowns. Only the six
// constraint shapes below ever occur.
struct LinSys {
  int n = 0;
  std::vector<std::pair<std::vector<int>, int>> eq;          // sum(A) = var
  std::vector<std::pair<std::vector<int>, uint64_t>> ge_sum; // sum(A) >= c
  std::vector<int> zero;                                     // var = 0
  std::vector<std::pair<int, int>> eq_var;                   // var = var
  std::vector<std::pair<int, std::vector<int>>> imp;  // var>0 -> sum(A)>0
  std::vector<std::pair<int, uint64_t>> ge;                  // var >= c
};

// Checks every constraint shape directly against an assignment.
bool check_assignment(const LinSys& sys, const std::vector<uint64_t>& x);

// ---------------------------------------------------------------------------
// Guessed profile of the database elements
//
// gamma[c] maps tree addresses in CCS_c to the spectrum of constant c over
// that address, delta[c] does the same for tallies over CCT_c, and eta
// counts, per invertible 2-type, the constants sending it inside the
// completed database.
struct GuessedProfile {
  std::vector<std::map<BitStr, Vec>> gamma, delta;
  std::map<int, uint64_t> eta;
};

std::map<int, uint64_t> derive_eta(const frontend::Signature& sig,
                                   const normalform::NormalForm& nf,
                                   const typespace::OneTypeTable& ot,
                                   const typespace::TwoTypeTable& tt,
                                   const frontend::Database& completed);

struct ProfileLimits {
  uint64_t max_profiles = 1ull << 16;
};

// Enumerates all profiles consistent with the invariants: gamma_eps +
// delta_eps = C, sibling values sum to their parent, an in-database
// invertible message at a full-depth address forces gamma there to
// C_lambda, and k in-database copies of the message at tally leaf t force
// delta_t >= k * C_mu. Throws ResourceError past the cap.
class ProfileIter {
 public:
  ProfileIter(const frontend::Signature& sig, const normalform::NormalForm& nf,
              const typespace::OneTypeTable& ot,
              const typespace::TwoTypeTable& tt,
              const frontend::Database& completed, ProfileLimits lim = {});
  std::optional<GuessedProfile> next();
  uint64_t yielded() const { return yielded_; }

 private:
  using Assign = std::pair<std::map<BitStr, Vec>, std::map<BitStr, Vec>>;
  std::vector<std::vector<Assign>> per_const_;
  std::map<int, uint64_t> eta_;
  std::vector<size_t> odo_;
  bool done_ = false;
  uint64_t yielded_ = 0;
  uint64_t cap_;
};

// ---------------------------------------------------------------------------
// Compressed index tries
//
// One trie per 1-type covers the live leaf positions of its spectrum or
// tally tree (those carrying at least one realizable message type). A node
// stands for every real address on its chain from lo down to hi: the skipped
// siblings hold no live leaf, so the distributions at those addresses
// provably coincide with the node's. Addresses outside the trie resolve to
// -1; their y-values are n_pi at u = 0 and zero otherwise.
struct TrieNode {
  BitStr lo, hi;
  int child[2] = {-1, -1};
  int leaf_pos = -1;                       // full tree position at a leaf
  std::vector<Vec> uset;                   // achievable values, sorted
  std::vector<int> yvar;                   // per uset entry
  std::vector<std::pair<Vec, Vec>> pairs;  // internal: (v, w) with v+w <= C
  std::vector<int> hvar;                   // per pair
};

struct Trie {
  std::vector<TrieNode> nodes;  // preorder; nodes[0] is the top when alive
  bool alive() const { return !nodes.empty(); }
  int resolve(const BitStr& s) const;
};

struct SystemView {
  std::vector<Trie> ytrie, ztrie;  // per 1-type id; dead types stay empty
  std::map<int, int> xvar;         // live invertible 2-type id -> variable
  std::vector<VarId> ids;          // variable index -> identity
  std::map<VarId, int> index;      // identity -> variable index
};

struct BuiltSystem {
  LinSys sys;
  SystemView view;
};

struct SysLimits {
  uint64_t max_vars = 1ull << 20;
};

// Emits the full counting system for one completion and one profile:
// spectrum/tally splitting along the tries, the root pairing y_{pi,eps,u} =
// z_{pi,eps,C-u}, leaf laws tying spectra to sender counts and tallies to
// multiples, sender symmetry x_lambda = x_{lambda^-1}, nonemptiness, the
// landing implications for non-invertible messages, and the database pins
// x_lambda >= eta_lambda plus the profile pins along CCS_c / CCT_c.
// Population variables exist only for viable 1-types that are either free of
// naming bits or exactly a constant's completed type. An unsatisfiable pin
// (a value no model can realize) becomes the constraint 0 >= 1 rather than
// an error. Throws ResourceError past the variable cap.
BuiltSystem build_system(const frontend::Signature& sig,
                         const normalform::NormalForm& nf,
                         const typespace::OneTypeTable& ot,
                         const typespace::TwoTypeTable& tt,
                         const frontend::Database& completed,
                         const GuessedProfile& prof, SysLimits lim = {});

// ---------------------------------------------------------------------------
// Extraction from explicit models
//
// Table-1 counts of a chromatic model over the materialized variables, and
// the profile its constants realize. Together these let a test verify that
// every constraint holds of counts read off a real model.
std::vector<uint64_t> extract_counts(const frontend::Signature& sig,
                                     const normalform::NormalForm& nf,
                                     const typespace::OneTypeTable& ot,
                                     const typespace::TwoTypeTable& tt,
                                     const semantics::Structure& A,
                                     const SystemView& view);

GuessedProfile profile_of(const frontend::Signature& sig,
                          const normalform::NormalForm& nf,
                          const typespace::OneTypeTable& ot,
                          const typespace::TwoTypeTable& tt,
                          const semantics::Structure& A,
                          const frontend::Database& completed);

}  // namespace gcdk::constraints
