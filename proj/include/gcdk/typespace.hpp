#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gcdk/ast.hpp"
#include "gcdk/normalform.hpp"
#include "gcdk/semantics.hpp"

namespace gcdk::typespace {

// A tree path over an index space of power-of-two size: most significant
// decision first, so position intervals halve per appended bit.
using BitStr = std::vector<uint8_t>;

// Count vector with one entry per counting conjunct, each in 0..C_i.
using Vec = std::vector<uint64_t>;

struct TypeLimits {
  uint64_t max_one_types = 1ull << 18;
  uint64_t max_two_types = 1ull << 22;
};

// ---------------------------------------------------------------------------
// 1-types
//
// A 1-type assigns every one-variable literal slot: unary u(x) for each unary
// predicate, then the reflexive r(x,x) per binary predicate. Structural
// consistency bakes in key irreflexivity and at most one naming bit. Types
// are listed lexicographically (slot 0 most significant). Viability adds the
// propositional alpha check and the spare-palette cap: the integer read off
// the spare bits must be a usable color, i.e. at most (m*C)^2.
//
// The index space is padded to a power of two; tree positions list the
// viable types first (preserving relative order) so that subtrees made of
// unviable or padding positions die wholesale.
struct OneTypeTable {
  int nu = 0, nb = 0;  // slot layout: [0,nu) unary, [nu,nu+nb) reflexive
  std::vector<std::vector<uint8_t>> types;  // consistent, lexicographic
  std::vector<char> viable;
  int n_viable = 0;
  int padded = 1, p = 0;   // index space size and its log
  std::vector<int> order;  // tree position -> type id (positions >= |types|
                           // and the tail of unviable ids are padding)
  std::vector<int> pos;    // type id -> tree position

  int slots() const { return nu + nb; }
  bool bit(int t, int slot) const { return types[t][slot] != 0; }
  int find(const std::vector<uint8_t>& bits) const;  // -1 when inconsistent
};

OneTypeTable enumerate_one_types(const frontend::Signature& sig,
                                 const normalform::NormalForm& nf,
                                 const TypeLimits& limits = {});

// The 1-type realized by an element of a structure, or by a constant in a
// completed database. -1 when the bits are structurally inconsistent.
int type_of(const OneTypeTable& ot, const frontend::Signature& sig,
            const semantics::Structure& A, int e);
int type_of_const(const OneTypeTable& ot, const frontend::Signature& sig,
                  const frontend::Database& completed, int c);

// ---------------------------------------------------------------------------
// 2-types
//
// Mixed slots: [2b] = b(x,y), [2b+1] = b(y,x) per binary predicate, with
// converse-linked predicates tied. A 2-type is a message when some counting
// predicate holds of (x,y); invertible when the inverse is a message too,
// InverseOnly when only the inverse is, Silent when neither direction is.
enum class TypeClass : uint8_t {
  Silent,
  InverseOnly,
  NonInvertibleMsg,
  InvertibleMsg
};

struct TwoType {
  int start = -1, end = -1;
  std::vector<uint8_t> mixed;
  TypeClass cls = TypeClass::Silent;
  // The displayed conjunction tau /\ alpha(x) /\ alpha(y) /\ guarded
  // beta-instances in both orientations is propositionally false.
  bool forbidden = false;
};

// Materialized over viable endpoint pairs only: a 2-type with an unviable
// endpoint can never be realized, and every equation that would mention one
// fixes its variable to zero anyway. The per-start M list keeps only
// non-invertible message types: silent types carry no tally mass, so
// dropping them from the index space loses nothing and keeps Q small.
struct TwoTypeTable {
  std::vector<TwoType> list;  // ordered by (start, pos[end], mixed)
  std::vector<int> inv_of;    // id of the converse 2-type
  std::vector<std::vector<int>> inv;     // Lambda_pi: invertible messages,
                                         // sorted by (pos[end], mixed)
  std::vector<std::vector<int>> noninv;  // M_pi: same order
  std::vector<int> idx_in_inv;           // id -> index within inv[start]
  std::vector<int> idx_in_noninv;
  std::vector<int> qpad, qbits;  // per start: padded |M_pi| and its log

  int find(int start, int end, const std::vector<uint8_t>& mixed) const;

 private:
  friend TwoTypeTable enumerate_two_types(const frontend::Signature&,
                                          const normalform::NormalForm&,
                                          const OneTypeTable&,
                                          const TypeLimits&);
  std::vector<int> by_key_;  // ids sorted by (start, end, mixed)
};

TwoTypeTable enumerate_two_types(const frontend::Signature& sig,
                                 const normalform::NormalForm& nf,
                                 const OneTypeTable& ot,
                                 const TypeLimits& limits = {});

// C_tau: component i is 1 when tau entails o_i(x,y).
Vec c_of(const normalform::NormalForm& nf, const TwoType& tau);

// ---------------------------------------------------------------------------
// Index sets and tree strings

// Position interval [lo, hi) selected by a path in a tree over 2^bits
// positions.
std::pair<int, int> interval(const BitStr& s, int bits);
BitStr leaf_string(int position, int bits);

// Lambda_{pi,s}: invertible messages from pi whose end type position lies in
// the s-interval of the 1-type tree. M_{pi,t}: the t-interval slice of the
// per-start M list.
std::vector<int> lambda_set(const TwoTypeTable& tt, const OneTypeTable& ot,
                            int pi, const BitStr& s);
std::vector<int> m_set(const TwoTypeTable& tt, int pi, const BitStr& t);

// ---------------------------------------------------------------------------
// Spectra and tallies on explicit structures

// Component i of spectrum: the number of b != a with o_i(a,b) whose 2-type
// is an invertible message with end position in the s-interval. The tally
// counts non-invertible messages within the t-slice of M instead.
Vec spectrum(const frontend::Signature& sig, const normalform::NormalForm& nf,
             const OneTypeTable& ot, const semantics::Structure& A, int a,
             const BitStr& s);
Vec tally(const frontend::Signature& sig, const normalform::NormalForm& nf,
          const OneTypeTable& ot, const TwoTypeTable& tt,
          const semantics::Structure& A, int a, const BitStr& t);

// ---------------------------------------------------------------------------
// Database messages and prefix-closure sets

struct DbMsg {
  int tau = -1;  // 2-type id
  int to = -1;   // receiving constant
};
struct ConstMsgs {
  std::vector<DbMsg> inv, noninv;
};

// Messages a constant sends to other constants inside a completed database.
// Pre: every constant's 1-type is viable (check type_of_const first).
ConstMsgs db_messages(const frontend::Signature& sig,
                      const normalform::NormalForm& nf, const OneTypeTable& ot,
                      const TwoTypeTable& tt,
                      const frontend::Database& completed, int c);

// CC_x = {eps} united with both one-bit extensions of every proper prefix
// of x; |CC_x| = 2|x|+1.
std::vector<BitStr> cc_of(const BitStr& x);

// S_c / T_c leaf strings of the in-database messages of c, and their closure
// sets CCS_c / CCT_c (always containing eps). All four sorted by (size, lex).
struct CcSets {
  std::vector<BitStr> s_c, t_c;
  std::vector<BitStr> ccs, cct;
};
CcSets ccs_cct(const frontend::Signature& sig,
               const normalform::NormalForm& nf, const OneTypeTable& ot,
               const TwoTypeTable& tt, const frontend::Database& completed,
               int c);

// ---------------------------------------------------------------------------
// Chromatization
//
// Recolors only the given spare predicates so that no element sends an
// invertible message to an element of its own resulting 1-type, and no two
// invertible-message partners of a common sender share one. Greedy coloring
// of the graph joining elements at invertible-message distance 1 or 2; the
// degree stays below (m*C)^2, so (m*C)^2 + 1 colors always suffice. Throws
// std::invalid_argument when the spare predicates cannot encode the colors.
semantics::Structure chromatize(const frontend::Signature& sig,
                                const normalform::NormalForm& nf,
                                const semantics::Structure& A,
                                const std::vector<int>& spares);

}  // namespace gcdk::typespace
