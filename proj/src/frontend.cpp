#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gcdk/frontend.hpp"

namespace gcdk::frontend {
namespace {

struct VarUse {
  bool x = false, y = false;
  VarUse operator|(VarUse o) const { return {x || o.x, y || o.y}; }
  VarUse without(int v) const {
    VarUse u = *this;
    (v == VarX ? u.x : u.y) = false;
    return u;
  }
};

VarUse term_use(Term t) {
  if (!t.is_var()) return {};
  return {t.var == VarX, t.var == VarY};
}

class Validator {
 public:
  explicit Validator(const Problem& p) : p_(p) {}

  void run() {
    VarUse fv = check(p_.phi);
    if (fv.x || fv.y) diag("phi must be a sentence (free variable present)");
    for (const auto& g : p_.db.lits) {
      size_t np = g.binary ? p_.sig.bin.size() : p_.sig.un.size();
      if (g.pred < 0 || (size_t)g.pred >= np || g.c0 < 0 ||
          (size_t)g.c0 >= p_.sig.consts.size() ||
          (g.binary && (g.c1 < 0 || (size_t)g.c1 >= p_.sig.consts.size())))
        diag("database literal over undeclared symbols");
    }
    if (!p_.db.consistent())
      diag("database is inconsistent (literal and its negation)");
    for (const auto& k : p_.pfds) check_pfd(k);
    if (!diags_.empty()) {
      std::ostringstream out;
      for (size_t i = 0; i < diags_.size(); ++i)
        out << (i ? "\n" : "") << diags_[i];
      throw ValidationError(out.str());
    }
  }

 private:
  const Problem& p_;
  std::vector<std::string> diags_;

  void diag(std::string m) { diags_.push_back(std::move(m)); }

  void check_term(Term t) {
    if (t.is_var()) {
      if (t.var != VarX && t.var != VarY) diag("only variables x and y may occur");
    } else if (t.cst < 0 || (size_t)t.cst >= p_.sig.consts.size()) {
      diag("undeclared constant in formula");
    }
  }

  void check_pfd(const Pfd& k) {
    if (k.left.empty() || (!k.unary() && k.right.empty()))
      diag("PFD word must be nonempty");
    for (const auto* w : {&k.left, &k.right})
      for (int b : *w) {
        if (b < 0 || (size_t)b >= p_.sig.bin.size())
          diag("PFD word over undeclared symbols");
        else if (!p_.sig.key_base[b])
          diag("PFD word contains non-key predicate '" + p_.sig.bin[b] + "'");
      }
  }

  VarUse check(const F& f) {
    switch (f->k) {
      case FK::True:
      case FK::False:
        return {};
      case FK::Unary:
        if (f->pred < 0 || (size_t)f->pred >= p_.sig.un.size())
          diag("undeclared unary predicate in formula");
        check_term(f->a);
        return term_use(f->a);
      case FK::Binary:
        if (f->pred < 0 || (size_t)f->pred >= p_.sig.bin.size())
          diag("undeclared binary predicate in formula");
        check_term(f->a);
        check_term(f->b);
        if (f->a.is_var() != f->b.is_var())
          diag("atom mixes a variable and a constant");
        return term_use(f->a) | term_use(f->b);
      case FK::Eq:
        if (!f->a.is_var() || !f->b.is_var())
          diag("equality atoms must relate the variables x and y");
        return term_use(f->a) | term_use(f->b);
      case FK::Not:
        return check(f->l);
      case FK::And:
      case FK::Or:
      case FK::Imp:
      case FK::Iff:
        return check(f->l) | check(f->r);
      case FK::Forall:
      case FK::Exists:
        return check(f->l).without(f->var);
      case FK::Count: {
        if (f->guard->k != FK::Binary || !f->guard->a.is_var() ||
            !f->guard->b.is_var() || f->guard->a.var == f->guard->b.var)
          diag("counting quantifier must be guarded by a binary atom over x and y");
        if (f->n > kMaxCount) diag("count exceeds cap");
        VarUse u = check(f->guard) | check(f->l);
        return u.without(f->var);
      }
      case FK::PfdAtom:
        check_pfd(*f->pfd);
        return {};
    }
    return {};
  }
};

// --- splitting ---

F sn_not(F f) {
  if (f->k == FK::True) return mk_false();
  if (f->k == FK::False) return mk_true();
  return mk_not(std::move(f));
}

F sn_and(F l, F r) {
  if (l->k == FK::False || r->k == FK::False) return mk_false();
  if (l->k == FK::True) return r;
  if (r->k == FK::True) return l;
  return mk_and(std::move(l), std::move(r));
}

F sn_or(F l, F r) {
  if (l->k == FK::True || r->k == FK::True) return mk_true();
  if (l->k == FK::False) return r;
  if (r->k == FK::False) return l;
  return mk_or(std::move(l), std::move(r));
}

F sn_imp(F l, F r) {
  if (l->k == FK::False || r->k == FK::True) return mk_true();
  if (l->k == FK::True) return r;
  if (r->k == FK::False) return sn_not(std::move(l));
  return mk_imp(std::move(l), std::move(r));
}

F sn_iff(F l, F r) {
  if (l->k == FK::True) return r;
  if (r->k == FK::True) return l;
  if (l->k == FK::False) return sn_not(std::move(r));
  if (r->k == FK::False) return sn_not(std::move(l));
  return mk_iff(std::move(l), std::move(r));
}

bool is_ground_atom(const F& f) {
  if (f->k == FK::Unary) return f->a.is_const();
  if (f->k == FK::Binary) return f->a.is_const() && f->b.is_const();
  return false;
}

GroundLit lit_of(const F& f) {
  if (f->k == FK::Unary) return {f->pred, false, f->a.cst, -1, true};
  return {f->pred, true, f->a.cst, f->b.cst, true};
}

void collect(const F& f, std::vector<GroundLit>& gs, std::vector<Pfd>& ks) {
  switch (f->k) {
    case FK::Unary:
    case FK::Binary:
      if (is_ground_atom(f)) {
        GroundLit g = lit_of(f);
        if (std::find(gs.begin(), gs.end(), g) == gs.end()) gs.push_back(g);
      }
      return;
    case FK::PfdAtom:
      if (std::find(ks.begin(), ks.end(), *f->pfd) == ks.end())
        ks.push_back(*f->pfd);
      return;
    case FK::Not:
    case FK::Forall:
    case FK::Exists:
      collect(f->l, gs, ks);
      return;
    case FK::Count:
      collect(f->l, gs, ks);
      return;
    case FK::And:
    case FK::Or:
    case FK::Imp:
    case FK::Iff:
      collect(f->l, gs, ks);
      collect(f->r, gs, ks);
      return;
    default:
      return;
  }
}

F subst(const F& f, const std::map<GroundLit, bool>& ga,
        const std::map<Pfd, bool>& ka) {
  switch (f->k) {
    case FK::Unary:
    case FK::Binary:
      if (is_ground_atom(f)) return ga.at(lit_of(f)) ? mk_true() : mk_false();
      return f;
    case FK::PfdAtom:
      return ka.at(*f->pfd) ? mk_true() : mk_false();
    case FK::Not:
      return sn_not(subst(f->l, ga, ka));
    case FK::And:
      return sn_and(subst(f->l, ga, ka), subst(f->r, ga, ka));
    case FK::Or:
      return sn_or(subst(f->l, ga, ka), subst(f->r, ga, ka));
    case FK::Imp:
      return sn_imp(subst(f->l, ga, ka), subst(f->r, ga, ka));
    case FK::Iff:
      return sn_iff(subst(f->l, ga, ka), subst(f->r, ga, ka));
    case FK::Forall: {
      F b = subst(f->l, ga, ka);
      if (b->k == FK::True || b->k == FK::False) return b;
      return mk_forall(f->var, std::move(b));
    }
    case FK::Exists: {
      F b = subst(f->l, ga, ka);
      if (b->k == FK::True || b->k == FK::False) return b;
      return mk_exists(f->var, std::move(b));
    }
    case FK::Count:
      return mk_count(f->cmp, f->n, f->var, f->guard, subst(f->l, ga, ka));
    default:
      return f;
  }
}

int mint_const(Signature& sig) {
  for (int n = 1;; ++n) {
    std::string name = "e" + std::to_string(n);
    if (sig.const_id(name) < 0) return sig.add_const(name);
  }
}

// Lays down a key-predicate chain from start to a fresh endpoint shared
// with other chains; intermediate nodes are fresh.
void add_chain(Signature& sig, Database& db, const std::vector<int>& word,
               int start, int end) {
  int cur = start;
  for (size_t i = 0; i < word.size(); ++i) {
    int nxt = i + 1 == word.size() ? end : mint_const(sig);
    db.add({word[i], true, cur, nxt, true});
    cur = nxt;
  }
}

}  // namespace

void validate_problem(const Problem& p) { Validator(p).run(); }

std::vector<Problem> split_standard_form(const F& psi, const Database& db,
                                         const Signature& sig) {
  std::vector<GroundLit> gs;
  std::vector<Pfd> ks;
  collect(psi, gs, ks);
  size_t bits = gs.size() + ks.size();
  if (bits > 20)
    throw ResourceError("too many embedded ground atoms and PFDs to split");
  std::vector<Problem> out;
  for (uint64_t mask = 0; mask < (1ull << bits); ++mask) {
    std::map<GroundLit, bool> ga;
    std::map<Pfd, bool> ka;
    for (size_t i = 0; i < gs.size(); ++i) ga[gs[i]] = (mask >> i) & 1;
    for (size_t i = 0; i < ks.size(); ++i)
      ka[ks[i]] = (mask >> (gs.size() + i)) & 1;
    Problem q;
    q.sig = sig;
    q.db = db;
    q.phi = subst(psi, ga, ka);
    for (const auto& [g, v] : ga) {
      GroundLit lit = g;
      lit.pos = v;
      q.db.add(lit);
    }
    for (const auto& [k, v] : ka) {
      if (v) {
        q.pfds.push_back(k);
        continue;
      }
      int a = mint_const(q.sig);
      int b = mint_const(q.sig);
      int join_l = mint_const(q.sig);
      add_chain(q.sig, q.db, k.left, a, join_l);
      add_chain(q.sig, q.db, k.left, b, join_l);
      if (!k.unary()) {
        int join_r = mint_const(q.sig);
        add_chain(q.sig, q.db, k.right, a, join_r);
        add_chain(q.sig, q.db, k.right, b, join_r);
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace gcdk::frontend
