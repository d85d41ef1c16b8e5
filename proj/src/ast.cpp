#include "gcdk/ast.hpp"

#include <algorithm>

namespace gcdk::frontend {

int Signature::unary_id(std::string_view n) const {
  for (size_t i = 0; i < un.size(); ++i)
    if (un[i] == n) return (int)i;
  return -1;
}

int Signature::binary_id(std::string_view n) const {
  for (size_t i = 0; i < bin.size(); ++i)
    if (bin[i] == n) return (int)i;
  return -1;
}

int Signature::const_id(std::string_view n) const {
  for (size_t i = 0; i < consts.size(); ++i)
    if (consts[i] == n) return (int)i;
  return -1;
}

int Signature::add_unary(const std::string& n, UKind k, int naming) {
  un.push_back(n);
  ukind.push_back(k);
  naming_for.push_back(naming);
  return (int)un.size() - 1;
}

int Signature::add_binary(const std::string& n) {
  bin.push_back(n);
  key.push_back(false);
  key_base.push_back(false);
  conv.push_back(-1);
  return (int)bin.size() - 1;
}

int Signature::add_key(const std::string& n) {
  int f = add_binary(n);
  int g = add_binary(n + "_inv");
  key[f] = key[g] = true;
  key_base[f] = true;
  conv[f] = g;
  conv[g] = f;
  return f;
}

int Signature::add_const(const std::string& n) {
  consts.push_back(n);
  return (int)consts.size() - 1;
}

static F node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

F mk_true() { return node({.k = FK::True}); }
F mk_false() { return node({.k = FK::False}); }

F mk_unary(int pred, Term t) {
  return node({.k = FK::Unary, .pred = pred, .a = t});
}

F mk_binary(int pred, Term s, Term t) {
  return node({.k = FK::Binary, .pred = pred, .a = s, .b = t});
}

F mk_eq(Term s, Term t) { return node({.k = FK::Eq, .a = s, .b = t}); }
F mk_not(F f) { return node({.k = FK::Not, .l = std::move(f)}); }
F mk_and(F l, F r) { return node({.k = FK::And, .l = std::move(l), .r = std::move(r)}); }
F mk_or(F l, F r) { return node({.k = FK::Or, .l = std::move(l), .r = std::move(r)}); }
F mk_imp(F l, F r) { return node({.k = FK::Imp, .l = std::move(l), .r = std::move(r)}); }
F mk_iff(F l, F r) { return node({.k = FK::Iff, .l = std::move(l), .r = std::move(r)}); }

F mk_forall(int var, F body) {
  return node({.k = FK::Forall, .l = std::move(body), .var = var});
}

F mk_exists(int var, F body) {
  return node({.k = FK::Exists, .l = std::move(body), .var = var});
}

F mk_count(Cmp cmp, uint64_t n, int var, F guard, F body) {
  return node({.k = FK::Count, .l = std::move(body), .var = var, .cmp = cmp,
               .n = n, .guard = std::move(guard)});
}

F mk_pfd_atom(Pfd p) { return node({.k = FK::PfdAtom, .pfd = std::move(p)}); }

F mk_and_all(const std::vector<F>& fs) {
  if (fs.empty()) return mk_true();
  F acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
  return acc;
}

F mk_or_all(const std::vector<F>& fs) {
  if (fs.empty()) return mk_false();
  F acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
  return acc;
}

bool equal(const F& f, const F& g) {
  if (f == g) return true;
  if (!f || !g) return false;
  if (f->k != g->k) return false;
  switch (f->k) {
    case FK::True:
    case FK::False:
      return true;
    case FK::Unary:
      return f->pred == g->pred && f->a == g->a;
    case FK::Binary:
      return f->pred == g->pred && f->a == g->a && f->b == g->b;
    case FK::Eq:
      return f->a == g->a && f->b == g->b;
    case FK::Not:
      return equal(f->l, g->l);
    case FK::And:
    case FK::Or:
    case FK::Imp:
    case FK::Iff:
      return equal(f->l, g->l) && equal(f->r, g->r);
    case FK::Forall:
    case FK::Exists:
      return f->var == g->var && equal(f->l, g->l);
    case FK::Count:
      return f->var == g->var && f->cmp == g->cmp && f->n == g->n &&
             equal(f->guard, g->guard) && equal(f->l, g->l);
    case FK::PfdAtom:
      return f->pfd == g->pfd;
  }
  return false;
}

void Database::add(GroundLit g) {
  auto it = std::lower_bound(lits.begin(), lits.end(), g);
  if (it != lits.end() && *it == g) return;
  lits.insert(it, g);
}

bool Database::contains(const GroundLit& g) const {
  return std::binary_search(lits.begin(), lits.end(), g);
}

bool Database::contains_pos(int pred, bool binary, int c0, int c1) const {
  return contains({pred, binary, c0, c1, true});
}

bool Database::consistent() const {
  for (const auto& g : lits) {
    if (!g.pos) continue;
    GroundLit neg = g;
    neg.pos = false;
    if (contains(neg)) return false;
  }
  return true;
}

}  // namespace gcdk::frontend
