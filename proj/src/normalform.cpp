#include "gcdk/normalform.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gcdk::normalform {

using namespace frontend;

namespace {

constexpr size_t kClauseCap = 4096;

bool is_t(const F& f) { return f->k == FK::True; }
bool is_f(const F& f) { return f->k == FK::False; }

unsigned term_mask(const Term& t) { return t.is_var() ? 1u << t.var : 0u; }

// Free-variable mask: bit 0 for x, bit 1 for y.
unsigned fv(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::PfdAtom:
      return 0;
    case FK::Unary:
      return term_mask(f->a);
    case FK::Binary:
    case FK::Eq:
      return term_mask(f->a) | term_mask(f->b);
    case FK::Not:
      return fv(f->l);
    case FK::And:
    case FK::Or:
    case FK::Imp:
    case FK::Iff:
      return fv(f->l) | fv(f->r);
    case FK::Forall:
    case FK::Exists:
      return fv(f->l) & ~(1u << f->var);
    case FK::Count:
      return (fv(f->guard) | fv(f->l)) & ~(1u << f->var);
  }
  return 0;
}

int var_count(unsigned mask) { return (mask & 1u) + ((mask >> 1) & 1u); }

void check_input(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
      return;
    case FK::PfdAtom:
      throw std::invalid_argument(
          "dependency atoms must be split out before normalization");
    case FK::Unary:
      if (f->a.is_const())
        throw std::invalid_argument(
            "ground atoms are not allowed in the quantified formula");
      return;
    case FK::Binary:
    case FK::Eq:
      if (f->a.is_const() || f->b.is_const())
        throw std::invalid_argument(
            "ground atoms are not allowed in the quantified formula");
      return;
    case FK::Not:
      check_input(f->l);
      return;
    case FK::And:
    case FK::Or:
    case FK::Imp:
    case FK::Iff:
      check_input(f->l);
      check_input(f->r);
      return;
    case FK::Forall:
    case FK::Exists:
      if (var_count(fv(f->l)) > 1)
        throw std::invalid_argument(
            "plain quantifier over a formula with two free variables is "
            "outside the guarded fragment");
      check_input(f->l);
      return;
    case FK::Count:
      if (f->guard->k != FK::Binary || !f->guard->a.is_var() ||
          !f->guard->b.is_var() || f->guard->a.var == f->guard->b.var)
        throw std::invalid_argument(
            "counting quantifier requires an atomic two-variable guard");
      check_input(f->l);
      return;
  }
}

Term swap_term(Term t) {
  if (t.is_var()) t.var ^= 1;
  return t;
}

// Exchanges x and y throughout, binders included. A bijective renaming, so
// it is always capture-safe; the free variable y becomes x and vice versa.
F swap_all(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::PfdAtom:
      return f;
    case FK::Unary:
      return mk_unary(f->pred, swap_term(f->a));
    case FK::Binary:
      return mk_binary(f->pred, swap_term(f->a), swap_term(f->b));
    case FK::Eq:
      return mk_eq(swap_term(f->a), swap_term(f->b));
    case FK::Not:
      return mk_not(swap_all(f->l));
    case FK::And:
      return mk_and(swap_all(f->l), swap_all(f->r));
    case FK::Or:
      return mk_or(swap_all(f->l), swap_all(f->r));
    case FK::Imp:
      return mk_imp(swap_all(f->l), swap_all(f->r));
    case FK::Iff:
      return mk_iff(swap_all(f->l), swap_all(f->r));
    case FK::Forall:
      return mk_forall(f->var ^ 1, swap_all(f->l));
    case FK::Exists:
      return mk_exists(f->var ^ 1, swap_all(f->l));
    case FK::Count:
      return mk_count(f->cmp, f->n, f->var ^ 1, swap_all(f->guard),
                      swap_all(f->l));
  }
  return f;
}

F neg_of(const F& f) {
  if (is_t(f)) return mk_false();
  if (is_f(f)) return mk_true();
  if (f->k == FK::Not) return f->l;
  return mk_not(f);
}

// Constant folding, trivial-equality folding, vacuous-binder removal.
// Domains are nonempty, so a quantifier over a closed body is dropped.
F simp(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::Unary:
    case FK::Binary:
    case FK::PfdAtom:
      return f;
    case FK::Eq:
      if (f->a == f->b) return mk_true();
      return f;
    case FK::Not:
      return neg_of(simp(f->l));
    case FK::And: {
      F l = simp(f->l), r = simp(f->r);
      if (is_f(l) || is_f(r)) return mk_false();
      if (is_t(l)) return r;
      if (is_t(r)) return l;
      return mk_and(l, r);
    }
    case FK::Or: {
      F l = simp(f->l), r = simp(f->r);
      if (is_t(l) || is_t(r)) return mk_true();
      if (is_f(l)) return r;
      if (is_f(r)) return l;
      return mk_or(l, r);
    }
    case FK::Imp: {
      F l = simp(f->l), r = simp(f->r);
      if (is_f(l) || is_t(r)) return mk_true();
      if (is_t(l)) return r;
      if (is_f(r)) return neg_of(l);
      return mk_imp(l, r);
    }
    case FK::Iff: {
      F l = simp(f->l), r = simp(f->r);
      if (is_t(l)) return r;
      if (is_t(r)) return l;
      if (is_f(l)) return neg_of(r);
      if (is_f(r)) return neg_of(l);
      return mk_iff(l, r);
    }
    case FK::Forall:
    case FK::Exists: {
      F b = simp(f->l);
      if (is_t(b) || is_f(b)) return b;
      if (!(fv(b) & (1u << f->var))) return b;
      return f->k == FK::Forall ? mk_forall(f->var, b)
                                : mk_exists(f->var, b);
    }
    case FK::Count: {
      F b = simp(f->l);
      if (f->cmp == Cmp::Ge && f->n == 0) return mk_true();
      if (is_f(b)) {
        switch (f->cmp) {
          case Cmp::Ge:
            return mk_false();
          case Cmp::Le:
            return mk_true();
          case Cmp::Eq:
            return f->n == 0 ? mk_true() : mk_false();
        }
      }
      return mk_count(f->cmp, f->n, f->var, f->guard, b);
    }
  }
  return f;
}

// A quantified subformula with no free variables, anywhere inside f.
F find_closed_q(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::Unary:
    case FK::Binary:
    case FK::Eq:
    case FK::PfdAtom:
      return nullptr;
    case FK::Not:
      return find_closed_q(f->l);
    case FK::And:
    case FK::Or:
    case FK::Imp:
    case FK::Iff: {
      F s = find_closed_q(f->l);
      return s ? s : find_closed_q(f->r);
    }
    case FK::Forall:
    case FK::Exists:
      if (fv(f) == 0) return f;
      return find_closed_q(f->l);
    case FK::Count:
      return find_closed_q(f->l);
  }
  return nullptr;
}

F replace_sub(const F& f, const F& s, const F& v) {
  if (equal(f, s)) return v;
  switch (f->k) {
    case FK::Not:
      return mk_not(replace_sub(f->l, s, v));
    case FK::And:
      return mk_and(replace_sub(f->l, s, v), replace_sub(f->r, s, v));
    case FK::Or:
      return mk_or(replace_sub(f->l, s, v), replace_sub(f->r, s, v));
    case FK::Imp:
      return mk_imp(replace_sub(f->l, s, v), replace_sub(f->r, s, v));
    case FK::Iff:
      return mk_iff(replace_sub(f->l, s, v), replace_sub(f->r, s, v));
    case FK::Forall:
      return mk_forall(f->var, replace_sub(f->l, s, v));
    case FK::Exists:
      return mk_exists(f->var, replace_sub(f->l, s, v));
    case FK::Count:
      return mk_count(f->cmp, f->n, f->var, f->guard,
                      replace_sub(f->l, s, v));
    default:
      return f;
  }
}

F rebuild_quant(const F& f, const F& body) {
  if (f->k == FK::Count)
    return simp(mk_count(f->cmp, f->n, f->var, f->guard, body));
  return simp(f->k == FK::Forall ? mk_forall(f->var, body)
                                 : mk_exists(f->var, body));
}

// Pulls closed quantified subformulas out of quantifier bodies by Shannon
// expansion on the sentence: Q(...S...) becomes
// (S /\ Q(...true...)) \/ (~S /\ Q(...false...)). Exact for plain and
// counting quantifiers alike because S is closed.
F hoist(const F& f) {
  switch (f->k) {
    case FK::Not:
      return mk_not(hoist(f->l));
    case FK::And:
      return mk_and(hoist(f->l), hoist(f->r));
    case FK::Or:
      return mk_or(hoist(f->l), hoist(f->r));
    case FK::Imp:
      return mk_imp(hoist(f->l), hoist(f->r));
    case FK::Iff:
      return mk_iff(hoist(f->l), hoist(f->r));
    case FK::Forall:
    case FK::Exists:
    case FK::Count: {
      F b = hoist(f->l);
      F s = find_closed_q(b);
      if (!s) return rebuild_quant(f, b);
      F on = hoist(rebuild_quant(f, simp(replace_sub(b, s, mk_true()))));
      F off = hoist(rebuild_quant(f, simp(replace_sub(b, s, mk_false()))));
      return simp(mk_or(mk_and(s, on), mk_and(mk_not(s), off)));
    }
    default:
      return f;
  }
}

// Negation normal form; counting quantifiers are complemented on their
// bounds, plain quantifiers dualize.
F nnf(const F& f, bool pos) {
  switch (f->k) {
    case FK::True:
      return pos ? mk_true() : mk_false();
    case FK::False:
      return pos ? mk_false() : mk_true();
    case FK::Unary:
    case FK::Binary:
    case FK::Eq:
      return pos ? f : mk_not(f);
    case FK::Not:
      return nnf(f->l, !pos);
    case FK::And:
      return pos ? mk_and(nnf(f->l, true), nnf(f->r, true))
                 : mk_or(nnf(f->l, false), nnf(f->r, false));
    case FK::Or:
      return pos ? mk_or(nnf(f->l, true), nnf(f->r, true))
                 : mk_and(nnf(f->l, false), nnf(f->r, false));
    case FK::Imp:
      return pos ? mk_or(nnf(f->l, false), nnf(f->r, true))
                 : mk_and(nnf(f->l, true), nnf(f->r, false));
    case FK::Iff:
      return pos ? mk_and(mk_or(nnf(f->l, false), nnf(f->r, true)),
                          mk_or(nnf(f->l, true), nnf(f->r, false)))
                 : mk_or(mk_and(nnf(f->l, true), nnf(f->r, false)),
                         mk_and(nnf(f->l, false), nnf(f->r, true)));
    case FK::Forall:
      return pos ? mk_forall(f->var, nnf(f->l, true))
                 : mk_exists(f->var, nnf(f->l, false));
    case FK::Exists:
      return pos ? mk_exists(f->var, nnf(f->l, true))
                 : mk_forall(f->var, nnf(f->l, false));
    case FK::Count: {
      F b = nnf(f->l, true);
      if (pos) return mk_count(f->cmp, f->n, f->var, f->guard, b);
      switch (f->cmp) {
        case Cmp::Ge:
          if (f->n == 0) return mk_false();
          return mk_count(Cmp::Le, f->n - 1, f->var, f->guard, b);
        case Cmp::Le:
          return mk_count(Cmp::Ge, f->n + 1, f->var, f->guard, b);
        case Cmp::Eq:
          if (f->n == 0) return mk_count(Cmp::Ge, 1, f->var, f->guard, b);
          return mk_or(mk_count(Cmp::Le, f->n - 1, f->var, f->guard, b),
                       mk_count(Cmp::Ge, f->n + 1, f->var, f->guard, b));
      }
      return f;
    }
    case FK::PfdAtom:
      throw std::logic_error("dependency atom survived input checks");
  }
  return f;
}

using Clause = std::vector<F>;

// Conjunctive normal form over the sentence-level skeleton, whose leaves
// are quantified sentences. Distribution can blow up on adversarial
// nestings; capped rather than Tseitin-ized because sentence-level flags
// cannot be forced uniform in a guarded signature.
std::vector<Clause> clauses_of(const F& f) {
  if (is_t(f)) return {};
  if (is_f(f)) return {Clause{}};
  if (f->k == FK::And) {
    auto a = clauses_of(f->l), b = clauses_of(f->r);
    a.insert(a.end(), b.begin(), b.end());
    if (a.size() > kClauseCap)
      throw ResourceError("sentence-level clause explosion");
    return a;
  }
  if (f->k == FK::Or) {
    auto a = clauses_of(f->l), b = clauses_of(f->r);
    if (a.empty() || b.empty()) return {};
    std::vector<Clause> out;
    out.reserve(a.size() * b.size());
    for (const auto& ca : a)
      for (const auto& cb : b) {
        Clause c = ca;
        c.insert(c.end(), cb.begin(), cb.end());
        out.push_back(std::move(c));
      }
    if (out.size() > kClauseCap)
      throw ResourceError("sentence-level clause explosion");
    return out;
  }
  if (f->k == FK::Forall || f->k == FK::Exists) return {Clause{f}};
  throw std::invalid_argument("open subformula at sentence level");
}

struct Ctx {
  Signature sig;
  std::vector<F> alphas;
  std::vector<std::pair<int, F>> universals;
  std::vector<std::pair<int, uint64_t>> counters;
  std::vector<int> fresh_bins;
  int next_q = 0, next_o = 0, next_e = 0;

  int fresh_unary() {
    std::string n;
    do n = "nf#q" + std::to_string(next_q++);
    while (sig.unary_id(n) >= 0);
    return sig.add_unary(n, UKind::Fresh);
  }
  int fresh_binary() {
    std::string n;
    do n = "nf#o" + std::to_string(next_o++);
    while (sig.binary_id(n) >= 0);
    fresh_bins.push_back(sig.add_binary(n));
    return fresh_bins.back();
  }
  int fresh_evac() {
    std::string n;
    do n = "nf#e" + std::to_string(next_e++);
    while (sig.binary_id(n) >= 0);
    fresh_bins.push_back(sig.add_binary(n));
    return fresh_bins.back();
  }
};

Term diag_term(Term t) {
  if (t.is_var()) t.var = VarX;
  return t;
}

// Substitutes y := x through a quantifier-free formula; x = y folds to true.
F to_diag(const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
      return f;
    case FK::Unary:
      return mk_unary(f->pred, diag_term(f->a));
    case FK::Binary:
      return mk_binary(f->pred, diag_term(f->a), diag_term(f->b));
    case FK::Eq:
      return mk_true();
    case FK::Not:
      return mk_not(to_diag(f->l));
    case FK::And:
      return mk_and(to_diag(f->l), to_diag(f->r));
    case FK::Or:
      return mk_or(to_diag(f->l), to_diag(f->r));
    case FK::Imp:
      return mk_imp(to_diag(f->l), to_diag(f->r));
    case FK::Iff:
      return mk_iff(to_diag(f->l), to_diag(f->r));
    default:
      throw std::logic_error("quantifier in a diagonal substitution");
  }
}

// Replaces equality atoms by their truth value over distinct pairs: x = y
// becomes false. Used for formulas destined for beta conjuncts, which are
// only ever evaluated at pairs of distinct elements.
F purge_eq(const F& f) {
  switch (f->k) {
    case FK::Eq:
      return f->a == f->b ? mk_true() : mk_false();
    case FK::Not:
      return mk_not(purge_eq(f->l));
    case FK::And:
      return mk_and(purge_eq(f->l), purge_eq(f->r));
    case FK::Or:
      return mk_or(purge_eq(f->l), purge_eq(f->r));
    case FK::Imp:
      return mk_imp(purge_eq(f->l), purge_eq(f->r));
    case FK::Iff:
      return mk_iff(purge_eq(f->l), purge_eq(f->r));
    default:
      return f;
  }
}

F or3(const F& a, const F& b, const F& c) {
  return simp(mk_or(a, mk_or(b, c)));
}
F or4(const F& a, const F& b, const F& c, const F& d) {
  return simp(mk_or(a, mk_or(b, mk_or(c, d))));
}

// Emits the skeleton conjuncts forcing q(x) -> exists_{cmp C} y (g /\ body).
// The bound variable is y and the free variable x. Witnesses at y = x (the
// diagonal condition D) are split off, since counters and guarded conjuncts
// only reach pairs of distinct elements.
void emit_count(Ctx& c, int q, Cmp cmp, uint64_t C, const F& g,
                const F& body) {
  bool fwd = g->a.var == VarX;  // guard written g(x,y) rather than g(y,x)
  int gp = g->pred;
  F qx = mk_unary(q, Term::X());
  F nqx = mk_not(qx);
  F D = simp(to_diag(mk_and(g, body)));
  F chb = simp(purge_eq(body));      // body over distinct pairs
  F W = simp(mk_and(g, chb));        // witness condition along a fresh edge
  bool noself = is_f(D);

  // Pieces for conjuncts guarded by the original predicate gp. When the
  // guard is inverted the constrained element sits at the y end.
  F gq = fwd ? nqx : mk_not(mk_unary(q, Term::Y()));
  F gch = fwd ? chb : swap_all(chb);
  F gD = fwd ? D : swap_all(D);
  auto o_atom = [&](int o) {
    return fwd ? mk_binary(o, Term::X(), Term::Y())
               : mk_binary(o, Term::Y(), Term::X());
  };

  auto emit_ge = [&] {
    if (noself) {
      int o = c.fresh_binary();
      c.counters.push_back({o, C});
      c.universals.push_back({o, simp(mk_or(nqx, W))});
      return;
    }
    if (C >= 2) {
      int o1 = c.fresh_binary();
      c.counters.push_back({o1, C - 1});
      c.universals.push_back({o1, or3(nqx, neg_of(D), W)});
    }
    int o2 = c.fresh_binary();
    c.counters.push_back({o2, C});
    c.universals.push_back({o2, or3(nqx, D, W)});
  };

  auto emit_le = [&] {
    if (C == 0) {
      c.universals.push_back({gp, or3(gq, neg_of(gch), mk_false())});
      if (!noself) c.alphas.push_back(simp(mk_or(nqx, neg_of(D))));
      return;
    }
    if (noself) {
      int o2 = c.fresh_binary();
      c.counters.push_back({o2, C});
      c.universals.push_back({gp, or3(gq, neg_of(gch), o_atom(o2))});
      return;
    }
    if (C == 1) {
      c.universals.push_back({gp, or3(gq, neg_of(gD), neg_of(gch))});
    } else {
      int o1 = c.fresh_binary();
      c.counters.push_back({o1, C - 1});
      c.universals.push_back(
          {gp, or4(gq, neg_of(gD), neg_of(gch), o_atom(o1))});
    }
    int o2 = c.fresh_binary();
    c.counters.push_back({o2, C});
    c.universals.push_back({gp, or4(gq, gD, neg_of(gch), o_atom(o2))});
  };

  switch (cmp) {
    case Cmp::Ge:
      emit_ge();
      break;
    case Cmp::Le:
      emit_le();
      break;
    case Cmp::Eq:
      if (C == 0) {
        emit_le();
      } else if (noself) {
        // Exact with a single counter: the o-successors are witnesses and
        // every witness is an o-successor.
        int o = c.fresh_binary();
        c.counters.push_back({o, C});
        c.universals.push_back({o, simp(mk_or(nqx, W))});
        c.universals.push_back({gp, or3(gq, neg_of(gch), o_atom(o))});
      } else {
        emit_ge();
        emit_le();
      }
      break;
  }
}

// Rewrites every counting subformula by a fresh unary predicate on its free
// variable, emitting the defining conjuncts. Returns a quantifier-free
// formula. Plain quantifiers cannot occur: closed ones were hoisted and
// vacuous ones simplified away.
F scott(Ctx& c, const F& f) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::Unary:
    case FK::Binary:
    case FK::Eq:
      return f;
    case FK::Not:
      return mk_not(scott(c, f->l));
    case FK::And:
      return mk_and(scott(c, f->l), scott(c, f->r));
    case FK::Or:
      return mk_or(scott(c, f->l), scott(c, f->r));
    case FK::Count: {
      bool swapped = f->var == VarX;
      F node = swapped ? swap_all(f) : f;
      F body = scott(c, node->l);
      int q = c.fresh_unary();
      emit_count(c, q, node->cmp, node->n, node->guard, body);
      return mk_unary(q, swapped ? Term::Y() : Term::X());
    }
    default:
      throw std::logic_error("unexpected node under scott rewrite");
  }
}

}  // namespace

uint64_t NormalForm::max_count() const {
  uint64_t m = 0;
  for (const auto& [o, ci] : counters) m = ci > m ? ci : m;
  return m;
}

std::vector<uint64_t> NormalForm::count_vector() const {
  std::vector<uint64_t> v;
  v.reserve(counters.size());
  for (const auto& [o, ci] : counters) v.push_back(ci);
  return v;
}

F NormalForm::to_formula() const {
  Term X = Term::X(), Y = Term::Y();
  std::vector<F> parts;
  parts.push_back(mk_forall(VarX, alpha));
  for (const auto& [e, beta] : universals)
    parts.push_back(mk_forall(
        VarX, mk_count(Cmp::Le, 0, VarY, mk_binary(e, X, Y),
                       mk_and(mk_not(beta), mk_not(mk_eq(X, Y))))));
  for (const auto& [o, ci] : counters)
    parts.push_back(mk_forall(VarX,
                              mk_count(Cmp::Eq, ci, VarY, mk_binary(o, X, Y),
                                       mk_not(mk_eq(X, Y)))));
  return mk_and_all(parts);
}

std::pair<NormalForm, Signature> to_normal_form(const F& phi, Signature sig) {
  if (fv(phi) != 0)
    throw std::invalid_argument("formula to normalize must be a sentence");
  check_input(phi);

  Ctx c{std::move(sig)};
  F f = nnf(hoist(simp(phi)), true);
  auto clauses = clauses_of(f);

  std::unordered_map<const Formula*, F> leaf_memo;
  auto leaf_body = [&](const F& leaf) {
    auto it = leaf_memo.find(leaf.get());
    if (it != leaf_memo.end()) return it->second;
    F b = leaf->var == VarY ? swap_all(leaf->l) : leaf->l;
    F r = simp(scott(c, b));
    leaf_memo.emplace(leaf.get(), r);
    return r;
  };

  for (const auto& clause : clauses) {
    std::vector<F> univ, exis;
    for (const F& leaf : clause)
      (leaf->k == FK::Forall ? univ : exis).push_back(leaf_body(leaf));
    if (univ.size() >= 2)
      throw std::invalid_argument(
          "disjunction of two universally quantified sentences has no "
          "guarded normal form");
    if (exis.empty()) {
      c.alphas.push_back(univ.empty() ? mk_false() : univ[0]);
      continue;
    }
    // forall-or-exists clause: every element points somewhere, and the
    // pointer edge carries the disjunction.
    F che = simp(mk_or_all(exis));
    F psu = univ.empty() ? mk_false() : univ[0];
    int o = c.fresh_binary();
    c.counters.push_back({o, 1});
    c.universals.push_back({o, or3(psu, che, swap_all(che))});
  }

  if (c.universals.empty())
    c.universals.push_back({c.fresh_evac(), mk_true()});
  if (c.counters.empty()) c.counters.push_back({c.fresh_binary(), 1});

  // No skeleton conjunct reads a fresh predicate on the diagonal (counting
  // excludes x = y and guarded conjuncts carry the x = y escape), so pin the
  // diagonals false rather than leave a free type bit per fresh predicate.
  for (int b : c.fresh_bins)
    c.alphas.push_back(mk_not(mk_binary(b, Term::X(), Term::X())));

  NormalForm nf;
  nf.alpha = simp(mk_and_all(c.alphas));
  nf.universals = std::move(c.universals);
  nf.counters = std::move(c.counters);
  return {std::move(nf), std::move(c.sig)};
}

F key_axioms(const Signature& sig) {
  Term X = Term::X(), Y = Term::Y();
  std::vector<F> parts;
  for (int b = 0; b < (int)sig.n_binary(); ++b) {
    if (!sig.key_base[b]) continue;
    int bi = sig.conv[b];
    parts.push_back(mk_forall(VarX, mk_not(mk_binary(b, X, X))));
    parts.push_back(mk_forall(
        VarX,
        mk_count(Cmp::Eq, 1, VarY, mk_binary(b, X, Y), mk_not(mk_eq(X, Y)))));
    parts.push_back(mk_forall(
        VarX, mk_count(Cmp::Le, 0, VarY, mk_binary(b, X, Y),
                       mk_not(mk_binary(bi, Y, X)))));
    parts.push_back(mk_forall(
        VarX, mk_count(Cmp::Le, 0, VarY, mk_binary(bi, X, Y),
                       mk_not(mk_binary(b, Y, X)))));
  }
  return mk_and_all(parts);
}

std::pair<Database, Signature> prepare_database(Database db, Signature sig,
                                                uint64_t m, uint64_t C) {
  int nc = (int)sig.n_consts();
  std::vector<int> nm(nc, -1);
  for (int u = 0; u < (int)sig.n_unary(); ++u)
    if (sig.naming_for[u] >= 0) nm[sig.naming_for[u]] = u;
  for (int k = 0; k < nc; ++k)
    if (nm[k] < 0) nm[k] = sig.add_unary(sig.consts[k], UKind::Naming, k);
  for (int k = 0; k < nc; ++k)
    for (int d = 0; d < nc; ++d)
      db.add(GroundLit{nm[k], false, d, -1, k == d});

  int spares = spare_predicate_count(m, C);
  int tag = 0;
  for (int i = 0; i < spares; ++i) {
    std::string n;
    do n = "sp#" + std::to_string(tag++);
    while (sig.unary_id(n) >= 0);
    sig.add_unary(n, UKind::Spare);
  }
  return {std::move(db), std::move(sig)};
}

int spare_predicate_count(uint64_t m, uint64_t C) {
  if (m == 0 || C == 0)
    throw std::invalid_argument("m and C must be positive");
  unsigned __int128 w = (unsigned __int128)m * C;
  unsigned __int128 z = w * w;
  int k = 0;
  while (z > 0) {
    ++k;
    z >>= 1;
  }
  return k;
}

}  // namespace gcdk::normalform
