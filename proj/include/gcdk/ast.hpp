#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcdk::frontend {

// ---------------------------------------------------------------------------
// Errors

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line), col(col) {}
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Signature

enum class UKind : uint8_t { Plain, Naming, Spare, Fresh, Path, Derived };

struct Signature {
  std::vector<std::string> un;       // unary predicate names
  std::vector<std::string> bin;      // binary predicate names
  std::vector<std::string> consts;   // individual constant names
  std::vector<UKind> ukind;          // per unary id
  std::vector<int> naming_for;       // unary id -> constant id, or -1
  std::vector<bool> key;             // binary id: true for a key predicate or its converse
  std::vector<bool> key_base;        // binary id: true for a user-declared key (not the converse)
  std::vector<int> conv;             // binary id -> converse id, or -1

  int unary_id(std::string_view n) const;
  int binary_id(std::string_view n) const;
  int const_id(std::string_view n) const;

  int add_unary(const std::string& n, UKind k = UKind::Plain, int naming = -1);
  int add_binary(const std::string& n);
  // Declares n and its converse n_inv; returns the id of n.
  int add_key(const std::string& n);
  int add_const(const std::string& n);

  bool is_graph_pred(int b) const { return key[b]; }
  size_t n_unary() const { return un.size(); }
  size_t n_binary() const { return bin.size(); }
  size_t n_consts() const { return consts.size(); }

  bool operator==(const Signature& o) const {
    return un == o.un && bin == o.bin && consts == o.consts && key == o.key &&
           conv == o.conv;
  }
};

// ---------------------------------------------------------------------------
// Terms and formulas

inline constexpr int VarX = 0;
inline constexpr int VarY = 1;

struct Term {
  int var = -1;    // 0 = x, 1 = y, -1 if constant
  int cst = -1;    // constant id, -1 if variable
  static Term X() { return {VarX, -1}; }
  static Term Y() { return {VarY, -1}; }
  static Term V(int v) { return {v, -1}; }
  static Term C(int c) { return {-1, c}; }
  bool is_var() const { return var >= 0; }
  bool is_const() const { return cst >= 0; }
  bool operator==(const Term&) const = default;
};

struct Pfd {
  std::vector<int> left;    // key predicate ids
  std::vector<int> right;   // empty for a unary PFD
  bool unary() const { return right.empty(); }
  auto operator<=>(const Pfd&) const = default;
};

enum class FK : uint8_t {
  True, False, Unary, Binary, Eq, Not, And, Or, Imp, Iff,
  Forall, Exists, Count, PfdAtom
};

enum class Cmp : uint8_t { Le, Ge, Eq };

struct Formula;
using F = std::shared_ptr<const Formula>;

struct Formula {
  FK k;
  int pred = -1;           // Unary/Binary
  Term a, b;               // atom arguments; Eq compares a and b
  F l, r;                  // children (Not/quantifiers use l only)
  int var = -1;            // Forall/Exists/Count
  Cmp cmp = Cmp::Eq;
  uint64_t n = 0;          // Count bound
  F guard;                 // Count guard atom (a Binary node)
  std::optional<Pfd> pfd;  // PfdAtom payload
};

F mk_true();
F mk_false();
F mk_unary(int pred, Term t);
F mk_binary(int pred, Term s, Term t);
F mk_eq(Term s, Term t);
F mk_not(F f);
F mk_and(F l, F r);
F mk_or(F l, F r);
F mk_imp(F l, F r);
F mk_iff(F l, F r);
F mk_forall(int var, F body);
F mk_exists(int var, F body);
F mk_count(Cmp cmp, uint64_t n, int var, F guard, F body);
F mk_pfd_atom(Pfd p);
F mk_and_all(const std::vector<F>& fs);   // empty -> true
F mk_or_all(const std::vector<F>& fs);    // empty -> false

bool equal(const F& f, const F& g);

// ---------------------------------------------------------------------------
// Database

struct GroundLit {
  int pred = -1;
  bool binary = false;
  int c0 = -1, c1 = -1;   // c1 = -1 for unary
  bool pos = true;
  auto operator<=>(const GroundLit&) const = default;
};

struct Database {
  std::vector<GroundLit> lits;   // sorted, unique

  void add(GroundLit g);
  bool contains(const GroundLit& g) const;
  bool contains_pos(int pred, bool binary, int c0, int c1 = -1) const;
  bool consistent() const;       // no literal together with its negation
  size_t size() const { return lits.size(); }
  bool operator==(const Database&) const = default;
};

// ---------------------------------------------------------------------------
// Problem

struct Problem {
  Signature sig;
  F phi;
  Database db;
  std::vector<Pfd> pfds;

  bool operator==(const Problem& o) const {
    return sig == o.sig && equal(phi, o.phi) && db == o.db && pfds == o.pfds;
  }
};

// Counting bound cap (design decision: machine naturals, default 2^31 - 1).
inline constexpr uint64_t kMaxCount = 2147483647ull;

}  // namespace gcdk::frontend
