#include "gcdk/pfd_unary.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace gcdk::pfd_unary {

using namespace frontend;

namespace {

using Word = std::vector<int>;

void flatten_and(const F& f, std::vector<F>& out) {
  if (f->k == FK::And) {
    flatten_and(f->l, out);
    flatten_and(f->r, out);
  } else {
    out.push_back(f);
  }
}

bool is_guard_atom(const F& f) {
  return f->k == FK::Binary && f->a.is_var() && f->b.is_var() &&
         f->a.var != f->b.var;
}

// Splits off an atomic binary conjunct to serve as a counting guard.
std::pair<F, F> split_guard(const F& f) {
  std::vector<F> cj;
  flatten_and(f, cj);
  size_t pick = cj.size();
  for (size_t i = 0; i < cj.size(); ++i)
    if (is_guard_atom(cj[i])) {
      pick = i;
      break;
    }
  if (pick == cj.size())
    throw std::invalid_argument(
        "three-variable rewrite needs an atomic binary conjunct as guard");
  std::vector<F> rest;
  for (size_t i = 0; i < cj.size(); ++i)
    if (i != pick) rest.push_back(cj[i]);
  return {cj[pick], mk_and_all(rest)};
}

std::string path_pred_name(const Word& w, const Signature& sig) {
  std::string n = "p#";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) n += '.';
    n += sig.bin[w[i]];
  }
  return n;
}

}  // namespace

std::vector<Pfd> prefix_close(std::vector<Pfd> k1) {
  std::set<Word> words;
  for (const Pfd& k : k1) {
    if (!k.unary())
      throw std::invalid_argument(
          "binary dependency passed to unary prefix closure");
    for (size_t i = 1; i <= k.left.size(); ++i)
      words.insert(Word(k.left.begin(), k.left.begin() + i));
  }
  std::vector<Pfd> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(Pfd{w, {}});
  return out;
}

F rewrite_three_var(const F& alpha, const F& beta, int free_var) {
  if (free_var != VarX && free_var != VarY)
    throw std::invalid_argument("free variable must be x or y");
  auto [ga, ra] = split_guard(alpha);
  auto [gb, rb] = split_guard(beta);
  F neq = mk_not(mk_eq(Term::X(), Term::Y()));

  // One or two far witnesses, distinct from the middle; x is rebound.
  F far_body = mk_and(neq, rb);
  F one_far = mk_count(Cmp::Ge, 1, VarX, gb, far_body);
  F two_far = mk_count(Cmp::Ge, 2, VarX, gb, far_body);

  int mid = free_var == VarX ? VarY : VarX;
  F d1 = mk_count(Cmp::Ge, 1, mid, ga,
                  mk_and_all({neq, ra, mk_not(beta), one_far}));
  F d2 = mk_count(Cmp::Ge, 1, mid, ga, mk_and_all({neq, ra, beta, two_far}));
  return mk_or(d1, d2);
}

UnaryElimResult eliminate_unary(const F& phi, const Database& db,
                                const std::vector<Pfd>& k1, Signature sig) {
  (void)db;  // the rewrite is independent of the ground part
  std::vector<Pfd> deps = k1;
  deps.erase(std::remove_if(deps.begin(), deps.end(),
                            [](const Pfd& k) { return k.left.empty(); }),
             deps.end());
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  if (deps != prefix_close(deps))
    throw std::invalid_argument(
        "unary dependencies must be prefix-closed before elimination");
  if (deps.empty()) return {phi, std::move(sig)};

  // One path predicate per distinct proper prefix across all dependencies.
  std::map<Word, int> path;
  for (const Pfd& k : deps)
    for (size_t i = 0; i + 1 <= k.left.size(); ++i)
      path.emplace(Word(k.left.begin(), k.left.begin() + i), -1);
  for (auto& [w, id] : path) {
    std::string base = path_pred_name(w, sig), name = base;
    for (int t = 0; sig.unary_id(name) >= 0; ++t)
      name = base + "'" + std::to_string(t);
    id = sig.add_unary(name, UKind::Path);
  }

  const Term X = Term::X(), Y = Term::Y();
  std::vector<F> parts{phi};

  // p_eps holds everywhere; p_{wf}(x) iff x ends an f-step from a w-end.
  for (const auto& [w, id] : path) {
    if (w.empty()) {
      parts.push_back(mk_forall(VarX, mk_unary(id, X)));
      continue;
    }
    Word head(w.begin(), w.end() - 1);
    parts.push_back(mk_forall(
        VarX,
        mk_iff(mk_unary(id, X),
               mk_count(Cmp::Ge, 1, VarY, mk_binary(w.back(), Y, X),
                        mk_unary(path.at(head), Y)))));
  }

  // No critical violations: never two distinct walk-ends stepping to the
  // same element, both distinct from it.
  for (const Pfd& k : deps) {
    Word head(k.left.begin(), k.left.end() - 1);
    F arm = mk_and(mk_unary(path.at(head), X),
                   mk_binary(k.left.back(), X, Y));
    F psi = rewrite_three_var(arm, arm, VarY);
    parts.push_back(mk_forall(VarY, mk_not(psi)));
  }

  return {mk_and_all(parts), std::move(sig)};
}

}  // namespace gcdk::pfd_unary
