#include "gcdk/pfd_binary.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <string>

#include "gcdk/pfd_unary.hpp"

namespace gcdk::pfd_binary {

using frontend::Cmp;
using frontend::Database;
using frontend::F;
using frontend::GroundLit;
using frontend::Pfd;
using frontend::ResourceError;
using frontend::Signature;
using frontend::Term;
using frontend::UKind;
using frontend::VarX;
using frontend::VarY;

int DerivedSignature::fan_id(const Word& w) const {
  auto it = fan.find(w);
  return it == fan.end() ? -1 : it->second;
}

int DerivedSignature::branch_id(const BranchKey& k) const {
  auto it = branch.find(k);
  return it == branch.end() ? -1 : it->second;
}

int DerivedSignature::isth_id(const IsthKey& k) const {
  auto it = isth.find(k);
  return it == isth.end() ? -1 : it->second;
}

int DerivedSignature::fork_id(const ForkKey& k) const {
  auto it = fork.find(k);
  return it == fork.end() ? -1 : it->second;
}

Word word_inverse(const Word& w, const Signature& sig) {
  Word out(w.rbegin(), w.rend());
  for (int& p : out) p = sig.conv[p];
  return out;
}

Word rotated_word(const Pfd& kappa, const Signature& sig) {
  assert(!kappa.unary() && !kappa.left.empty() && !kappa.right.empty());
  Word fbar(kappa.left.begin(), kappa.left.end() - 1);
  int f = kappa.left.back();
  Word out;
  out.push_back(f);
  out.push_back(sig.conv[f]);
  for (int p : word_inverse(fbar, sig)) out.push_back(p);
  for (int p : kappa.right) out.push_back(p);
  for (int p : word_inverse(kappa.right, sig)) out.push_back(p);
  for (int p : fbar) out.push_back(p);
  return out;
}

std::vector<Pfd> left_prefix_close(const std::vector<Pfd>& k2) {
  std::set<Pfd> out;
  for (const Pfd& k : k2) {
    if (k.left.empty() || k.right.empty()) continue;
    for (size_t i = 1; i <= k.left.size(); ++i)
      out.insert(Pfd{Word(k.left.begin(), k.left.begin() + i), k.right});
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Axiom generation

namespace {

Word slice(const Word& w, size_t from, size_t to) {
  return Word(w.begin() + from, w.begin() + to);
}

std::string word_name(const Word& w, const Signature& sig) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += sig.bin[w[i]];
  }
  return out;
}

// All possible branch instances for a rotated word, with their tour indices.
struct BranchSite {
  BranchKey b1a, b1c, b2;
  bool has_b1a, has_b1c, has_b2;
  Word t0bar, t1bar, t2bar;
};

std::vector<BranchSite> branch_sites(const Word& r, const Signature& sig) {
  std::vector<BranchSite> out;
  int n = static_cast<int>(r.size());
  for (int i = 2; i < n - 1; ++i) {
    for (int j = i + 1; j <= n - 1; ++j) {
      BranchSite s;
      s.t0bar = slice(r, 2, i);
      s.t1bar = slice(r, i + 1, j);
      s.t2bar = slice(r, j + 1, n);
      int t1 = r[i], t2 = r[j];
      s.b1a = BranchKey{1, r[0], t1, t2, s.t0bar, s.t1bar};
      s.b1c = BranchKey{1, r[0], sig.conv[t2], sig.conv[t1], s.t2bar, s.t1bar};
      s.b2 = BranchKey{2, r[0], t1, t2, s.t0bar, s.t2bar};
      s.has_b1a = s.t0bar.size() != 1 && s.t1bar.size() != 1;
      s.has_b1c = s.t2bar.size() != 1 && s.t1bar.size() != 1;
      s.has_b2 = s.t0bar.size() != 1 && s.t2bar.size() != 1;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Pendant sites for configs (v) and (vi), one per interior tour position.
struct PendantSite {
  int t1;        // the letter consumed between pendant and anchor
  Word fanw;     // closed walk the pendant witness carries
  Word dpw;      // database excursion word
  bool out;      // false: config (v) shape, true: config (vi) shape
};

std::vector<PendantSite> pendant_sites(const Word& r) {
  std::vector<PendantSite> out;
  int n = static_cast<int>(r.size());
  for (int i = 2; i <= n - 1; ++i) {
    Word t0 = slice(r, 2, i);
    Word tail = slice(r, i + 1, n);
    out.push_back({r[i], t0, tail, false});
    out.push_back({r[i], tail, t0, true});
  }
  return out;
}

F eq_xy() { return frontend::mk_eq(Term::X(), Term::Y()); }

}  // namespace

std::pair<F, DerivedSignature> gen_derived_axioms(const Pfd& kappa,
                                                  Signature& sig) {
  using namespace frontend;
  DerivedSignature ds;
  ds.rot = rotated_word(kappa, sig);
  const Word& r = ds.rot;
  int n = static_cast<int>(r.size());
  int f = r[0];
  std::vector<F> ax;

  // Mints the named unary if new; returns (id, freshly minted).
  auto mint = [&](const std::string& name) -> std::pair<int, bool> {
    int id = sig.unary_id(name);
    if (id >= 0) return {id, false};
    return {sig.add_unary(name, UKind::Derived), true};
  };

  // Fans: every contiguous sub-word, shortest first so axiom bodies only
  // reference fans already minted.
  std::set<Word> fan_words;
  fan_words.insert(Word{});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) fan_words.insert(slice(r, i, j));
  std::vector<Word> fans(fan_words.begin(), fan_words.end());
  std::stable_sort(fans.begin(), fans.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });
  for (const Word& w : fans) {
    auto [id, fresh] = mint("fan#" + word_name(w, sig));
    ds.fan[w] = id;
    if (!fresh) continue;
    if (w.empty()) {
      ax.push_back(mk_forall(VarX, mk_unary(id, Term::X())));
    } else if (w.size() == 1) {
      ax.push_back(mk_forall(VarX, mk_not(mk_unary(id, Term::X()))));
    } else {
      std::vector<F> alts;
      for (size_t j = 1; j < w.size(); ++j) {
        F body = mk_and_all({mk_not(eq_xy()),
                             mk_unary(ds.fan.at(slice(w, 1, j)), Term::Y()),
                             mk_binary(w[j], Term::Y(), Term::X())});
        F cnt = mk_count(Cmp::Ge, 1, VarY,
                         mk_binary(w[0], Term::X(), Term::Y()), body);
        alts.push_back(mk_and(
            mk_unary(ds.fan.at(slice(w, j + 1, w.size())), Term::X()), cnt));
      }
      ax.push_back(mk_forall(
          VarX, mk_iff(mk_unary(id, Term::X()), mk_or_all(alts))));
    }
  }

  // Forks.
  for (const PendantSite& p : pendant_sites(r)) {
    if (p.fanw.size() == 1) continue;
    ForkKey k{p.fanw, p.t1, p.out};
    auto [id, fresh] =
        mint(std::string("fork#") + (p.out ? "o" : "i") + "|" + sig.bin[f] +
             "|" + sig.bin[p.t1] + "|" + word_name(p.fanw, sig));
    ds.fork[k] = id;
    if (!fresh) continue;
    F wit = mk_unary(ds.fan.at(p.fanw), Term::Y());
    F cnt;
    if (p.out) {
      F body = mk_and_all(
          {mk_not(eq_xy()), mk_binary(f, Term::Y(), Term::X()), wit});
      cnt = mk_count(Cmp::Ge, 2, VarY, mk_binary(p.t1, Term::X(), Term::Y()),
                     body);
    } else {
      F body = mk_and_all(
          {mk_not(eq_xy()), mk_binary(p.t1, Term::Y(), Term::X()), wit});
      cnt = mk_count(Cmp::Ge, 2, VarY, mk_binary(f, Term::Y(), Term::X()),
                     body);
    }
    ax.push_back(mk_forall(VarX, mk_iff(mk_unary(id, Term::X()), cnt)));
  }

  // Branches.
  auto emit_branch = [&](const BranchKey& k) {
    std::string nm = (k.which == 1 ? "br1#" : "br2#") + sig.bin[k.g] + "|" +
                     sig.bin[k.t1] + "|" + sig.bin[k.t2] + "|" +
                     word_name(k.wz, sig) + "|" + word_name(k.wo, sig);
    auto [id, fresh] = mint(nm);
    ds.branch[k] = id;
    if (!fresh) return;
    F beta = mk_and_all({mk_binary(k.g, Term::X(), Term::Y()),
                         mk_binary(k.t1, Term::X(), Term::Y()),
                         mk_unary(ds.fan.at(k.wz), Term::X())});
    if (k.which == 1) {
      F alpha = mk_and_all({mk_binary(k.g, Term::X(), Term::Y()),
                            mk_binary(k.t2, Term::Y(), Term::X()),
                            mk_unary(ds.fan.at(k.wo), Term::Y())});
      F body = pfd_unary::rewrite_three_var(alpha, beta, VarX);
      ax.push_back(
          mk_forall(VarX, mk_iff(mk_unary(id, Term::X()), body)));
    } else {
      F alpha = mk_and_all({mk_binary(k.g, Term::X(), Term::Y()),
                            mk_binary(k.t2, Term::Y(), Term::X()),
                            mk_unary(ds.fan.at(k.wo), Term::X())});
      F body = pfd_unary::rewrite_three_var(alpha, beta, VarY);
      ax.push_back(
          mk_forall(VarY, mk_iff(mk_unary(id, Term::Y()), body)));
    }
  };
  std::vector<BranchSite> sites = branch_sites(r, sig);
  for (const BranchSite& s : sites) {
    if (s.has_b1a) emit_branch(s.b1a);
    if (s.has_b1c) emit_branch(s.b1c);
    if (s.has_b2) emit_branch(s.b2);
  }

  // Isthmuses: every split of the word a branch core's closed walk replaces,
  // the pendant shapes used by configs (v)/(vi), and the peel closure.
  std::set<IsthKey> wanted;
  auto add_splits = [&](const Word& w, int inner) {
    for (size_t a = 0; a <= w.size(); ++a)
      for (size_t b = a; b <= w.size(); ++b)
        wanted.insert(IsthKey{slice(w, b, w.size()), inner, slice(w, 0, a)});
  };
  for (const BranchSite& s : sites) {
    if (s.has_b1a) add_splits(s.t2bar, ds.branch.at(s.b1a));
    if (s.has_b2) add_splits(s.t1bar, ds.branch.at(s.b2));
    if (s.has_b1c) add_splits(s.t0bar, ds.branch.at(s.b1c));
  }
  for (const PendantSite& p : pendant_sites(r)) {
    if (p.fanw.size() == 1) continue;
    int inner = ds.fan.at(p.fanw);
    if (p.out)
      wanted.insert(IsthKey{{p.t1}, inner, {f}});
    else
      wanted.insert(IsthKey{{sig.conv[f]}, inner, {p.t1}});
    wanted.insert(IsthKey{{}, inner, {}});
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<IsthKey> cur(wanted.begin(), wanted.end());
    for (const IsthKey& k : cur)
      for (size_t i = 0; i < k.suffix.size(); ++i)
        for (size_t j = 0; j < k.prefix.size(); ++j)
          grew |= wanted
                      .insert(IsthKey{slice(k.suffix, i + 1, k.suffix.size()),
                                      k.inner, slice(k.prefix, 0, j)})
                      .second;
  }
  std::vector<IsthKey> isths(wanted.begin(), wanted.end());
  std::stable_sort(isths.begin(), isths.end(),
                   [](const IsthKey& a, const IsthKey& b) {
                     return a.suffix.size() + a.prefix.size() <
                            b.suffix.size() + b.prefix.size();
                   });
  for (const IsthKey& k : isths) {
    auto [id, fresh] = mint("isth#" + word_name(k.suffix, sig) + "|" +
                            sig.un[k.inner] + "|" + word_name(k.prefix, sig));
    ds.isth[k] = id;
    if (!fresh) continue;
    std::vector<F> alts;
    alts.push_back(mk_and_all({mk_unary(ds.fan.at(k.suffix), Term::X()),
                               mk_unary(k.inner, Term::X()),
                               mk_unary(ds.fan.at(k.prefix), Term::X())}));
    for (size_t i = 0; i < k.suffix.size(); ++i) {
      for (size_t j = 0; j < k.prefix.size(); ++j) {
        int sub = ds.isth.at(IsthKey{slice(k.suffix, i + 1, k.suffix.size()),
                                     k.inner, slice(k.prefix, 0, j)});
        F body = mk_and_all({mk_not(eq_xy()),
                             mk_binary(k.prefix[j], Term::Y(), Term::X()),
                             mk_unary(sub, Term::Y())});
        F cnt = mk_count(Cmp::Ge, 1, VarY,
                         mk_binary(k.suffix[i], Term::X(), Term::Y()), body);
        alts.push_back(mk_and_all(
            {mk_unary(ds.fan.at(slice(k.suffix, 0, i)), Term::X()),
             mk_unary(ds.fan.at(slice(k.prefix, j + 1, k.prefix.size())),
                      Term::X()),
             cnt}));
      }
    }
    ax.push_back(
        mk_forall(VarX, mk_iff(mk_unary(id, Term::X()), mk_or_all(alts))));
  }

  // ~V: no element carries a fully collapsed violation core.
  std::vector<F> vparts;
  for (const BranchSite& s : sites) {
    if (!s.has_b1a || s.t2bar.size() == 1) continue;
    vparts.push_back(mk_and(mk_unary(ds.fan.at(s.t2bar), Term::X()),
                            mk_unary(ds.branch.at(s.b1a), Term::X())));
  }
  if (!vparts.empty())
    ax.push_back(mk_forall(VarX, mk_not(mk_or_all(vparts))));

  return {mk_and_all(ax), std::move(ds)};
}

// ---------------------------------------------------------------------------
// Violation configurations

namespace {

// Atom lookups parameterized so the same detector runs on complete databases
// (false = not present) and on partial tri-state assignments (true and false
// both mean "in every extension").
struct AtomView {
  std::function<bool(int, int, int)> bin_true;
  std::function<bool(int, int, int)> bin_false;
  std::function<bool(int, int)> un_true;
  std::function<bool(int, int)> un_false;
};

// Reachability c -> d consuming `w`, stepping over database edges and
// skipping closed sub-walks certified by fan atoms.
bool dp_walk(const Word& w, int from, int to, int n_consts,
             const DerivedSignature& ds, const AtomView& v) {
  size_t len = w.size();
  std::vector<char> reach((len + 1) * n_consts, 0);
  auto idx = [&](size_t pos, int c) { return pos * n_consts + c; };
  std::vector<std::pair<size_t, int>> work{{0, from}};
  reach[idx(0, from)] = 1;
  while (!work.empty()) {
    auto [pos, c] = work.back();
    work.pop_back();
    auto push = [&](size_t pos2, int c2) {
      if (!reach[idx(pos2, c2)]) {
        reach[idx(pos2, c2)] = 1;
        work.push_back({pos2, c2});
      }
    };
    if (pos < len) {
      for (int d = 0; d < n_consts; ++d)
        if (v.bin_true(w[pos], c, d)) push(pos + 1, d);
      for (size_t j = pos + 1; j <= len; ++j) {
        int fid = ds.fan_id(slice(w, pos, j));
        if (fid >= 0 && v.un_true(fid, c)) push(j, c);
      }
    }
  }
  return reach[idx(len, to)];
}

bool configs_fire_one(const DerivedSignature& ds, const Signature& sig,
                      const AtomView& v) {
  const Word& r = ds.rot;
  int n = static_cast<int>(r.size());
  int f = r[0];
  int K = static_cast<int>(sig.n_consts());
  if (K == 0) return false;

  auto dp = [&](const Word& w, int a, int b) {
    return dp_walk(w, a, b, K, ds, v);
  };

  // (x): an active start, r[0] and r[1] over database edges, the remainder
  // an excursion returning to the first element.
  Word rest = slice(r, 2, n);
  for (int b0 = 0; b0 < K; ++b0)
    for (int b1 = 0; b1 < K; ++b1) {
      if (b1 == b0 || !v.bin_true(r[0], b0, b1)) continue;
      for (int b2 = 0; b2 < K; ++b2) {
        if (b2 == b0 || b2 == b1 || !v.bin_true(r[1], b1, b2)) continue;
        if (dp(rest, b2, b0)) return true;
      }
    }

  // (ii)-(iv) and the isthmus-reached variants: a branch core at a constant
  // with one closed walk replaced by a database excursion.
  auto branch_with_dp = [&](const BranchKey& k, const Word& word) {
    int id = ds.branch_id(k);
    if (id < 0) return false;
    for (int b0 = 0; b0 < K; ++b0)
      if (v.un_true(id, b0) && dp(word, b0, b0)) return true;
    return false;
  };
  auto isth_with_dp = [&](const BranchKey& k, const Word& word) {
    if (ds.branch_id(k) < 0) return false;
    int inner = ds.branch.at(k);
    for (size_t a = 0; a <= word.size(); ++a)
      for (size_t b = a; b <= word.size(); ++b) {
        int id = ds.isth_id(
            IsthKey{slice(word, b, word.size()), inner, slice(word, 0, a)});
        if (id < 0) continue;
        Word mid = slice(word, a, b);
        for (int b0 = 0; b0 < K; ++b0)
          if (v.un_true(id, b0) && dp(mid, b0, b0)) return true;
      }
    return false;
  };
  for (const BranchSite& s : branch_sites(r, sig)) {
    if (branch_with_dp(s.b1a, s.t2bar)) return true;
    if (branch_with_dp(s.b1c, s.t0bar)) return true;
    if (branch_with_dp(s.b2, s.t1bar)) return true;
    if (isth_with_dp(s.b1a, s.t2bar)) return true;
    if (isth_with_dp(s.b2, s.t1bar)) return true;
    if (isth_with_dp(s.b1c, s.t0bar)) return true;
  }

  // (v)/(vi): pendant witness beside two database anchors. The fork atom, or
  // a pendant isthmus whose witness provably differs from the second anchor,
  // certifies a third distinct element.
  for (const PendantSite& p : pendant_sites(r)) {
    if (p.fanw.size() == 1) continue;
    int fanid = ds.fan.at(p.fanw);
    int forkid = ds.fork_id(ForkKey{p.fanw, p.t1, p.out});
    int pendid;
    if (p.out)
      pendid = ds.isth_id(IsthKey{{p.t1}, fanid, {f}});
    else
      pendid = ds.isth_id(IsthKey{{sig.conv[f]}, fanid, {p.t1}});
    for (int c = 0; c < K; ++c) {
      for (int d = 0; d < K; ++d) {
        if (c == d) continue;
        // c is the pendant anchor; d the other database anchor. The pendant
        // witness certifies a third element only if d itself provably fails
        // the witness pattern, so the trio test reads definite-false atoms
        // and the whole detector stays monotone on partial assignments.
        if (!v.bin_true(f, d, c)) continue;
        bool trio_refuted =
            p.out ? v.bin_false(p.t1, c, d) || v.un_false(fanid, d)
                  : v.bin_false(p.t1, d, c) || v.un_false(fanid, d);
        bool ok = (forkid >= 0 && v.un_true(forkid, c)) ||
                  (pendid >= 0 && v.un_true(pendid, c) && trio_refuted);
        if (!ok) continue;
        bool walk = p.out ? dp(p.dpw, d, c) : dp(p.dpw, c, d);
        if (walk) return true;
      }
    }
  }
  return false;
}

}  // namespace

bool check_violation_configs(const Pfd& kappa, const Database& completed,
                             const DerivedSignature& derived,
                             const Signature& sig) {
  AtomView v;
  v.bin_true = [&](int p, int c, int d) {
    return completed.contains_pos(p, true, c, d);
  };
  v.bin_false = [&](int p, int c, int d) {
    return !completed.contains_pos(p, true, c, d);
  };
  v.un_true = [&](int p, int c) { return completed.contains_pos(p, false, c); };
  v.un_false = [&](int p, int c) {
    return !completed.contains_pos(p, false, c);
  };
  (void)kappa;
  return configs_fire_one(derived, sig, v);
}

// ---------------------------------------------------------------------------
// Completion enumeration

size_t CompletionIter::atom_u(int p, int c) const {
  return static_cast<size_t>(p) * sig_.n_consts() + c;
}

size_t CompletionIter::atom_b(int p, int c, int d) const {
  size_t k = sig_.n_consts();
  return sig_.n_unary() * k + (static_cast<size_t>(p) * k + c) * k + d;
}

CompletionIter::CompletionIter(
    Database gamma, const Signature& sig,
    std::vector<std::pair<Pfd, const DerivedSignature*>> kappas,
    CompletionLimits limits)
    : sig_(sig), kappas_(std::move(kappas)), limits_(limits) {
  size_t K = sig_.n_consts();
  n_atoms_ = sig_.n_unary() * K + sig_.n_binary() * K * K;
  base_.assign(n_atoms_, Tri::Open);

  auto set = [&](size_t idx, Tri t) {
    if (base_[idx] == Tri::Open)
      base_[idx] = t;
    else if (base_[idx] != t)
      dead_ = true;
  };

  for (const GroundLit& g : gamma.lits) {
    Tri t = g.pos ? Tri::True : Tri::False;
    set(g.binary ? atom_b(g.pred, g.c0, g.c1) : atom_u(g.pred, g.c0), t);
  }
  int NU = static_cast<int>(sig_.n_unary());
  int NB = static_cast<int>(sig_.n_binary());
  for (int u = 0; u < NU; ++u) {
    if (sig_.ukind[u] == UKind::Naming) {
      for (size_t c = 0; c < K; ++c)
        set(atom_u(u, c),
            static_cast<int>(c) == sig_.naming_for[u] ? Tri::True : Tri::False);
    } else if (sig_.ukind[u] == UKind::Spare) {
      for (size_t c = 0; c < K; ++c) set(atom_u(u, c), Tri::False);
    }
  }
  for (int b = 0; b < NB; ++b)
    if (sig_.key[b])
      for (size_t c = 0; c < K; ++c) set(atom_b(b, c, c), Tri::False);
  for (auto& [kappa, ds] : kappas_) {
    for (auto& [w, id] : ds->fan) {
      if (w.empty())
        for (size_t c = 0; c < K; ++c) set(atom_u(id, c), Tri::True);
      else if (w.size() == 1)
        for (size_t c = 0; c < K; ++c) set(atom_u(id, c), Tri::False);
    }
  }

  if (dead_ || !propagate(base_) || config_fires(base_)) {
    dead_ = true;
    return;
  }
  stack_.push_back({base_, 0});
}

// Forward closure: converse pairing, key functionality, and definitional
// lower bounds of the derived predicates over the constants. Returns false
// on conflict. Never forces a derived atom false: its witness may lie
// outside the database.
bool CompletionIter::propagate(std::vector<Tri>& v) const {
  size_t K = sig_.n_consts();
  bool conflict = false;
  auto force = [&](size_t idx, Tri t) -> bool {
    if (v[idx] == t) return false;
    if (v[idx] == Tri::Open) {
      v[idx] = t;
      return true;
    }
    conflict = true;
    return false;
  };

  int NB = static_cast<int>(sig_.n_binary());
  bool changed = true;
  while (changed && !conflict) {
    changed = false;
    for (int b = 0; b < NB && !conflict; ++b) {
      int cb = sig_.conv[b];
      for (size_t c = 0; c < K; ++c) {
        for (size_t d = 0; d < K; ++d) {
          Tri t = v[atom_b(b, c, d)];
          if (t == Tri::Open) continue;
          if (cb >= 0) changed |= force(atom_b(cb, d, c), t);
          if (t == Tri::True && sig_.key_base[b]) {
            for (size_t e = 0; e < K; ++e)
              if (e != d) changed |= force(atom_b(b, c, e), Tri::False);
          }
        }
      }
    }
    if (conflict) break;

    for (auto& [kappa, dsp] : kappas_) {
      const DerivedSignature& ds = *dsp;
      int f = ds.rot[0];
      auto tru_b = [&](int p, int c, int d) {
        return v[atom_b(p, c, d)] == Tri::True;
      };
      auto tru_u = [&](int p, int c) { return v[atom_u(p, c)] == Tri::True; };

      for (auto& [w, id] : ds.fan) {
        if (w.size() < 2) continue;
        for (size_t c = 0; c < K; ++c) {
          if (v[atom_u(id, c)] == Tri::True) continue;
          bool def = false;
          for (size_t j = 1; j < w.size() && !def; ++j) {
            if (!tru_u(ds.fan.at(slice(w, j + 1, w.size())), c)) continue;
            for (size_t y = 0; y < K && !def; ++y)
              def = y != c && tru_b(w[0], c, y) &&
                    tru_u(ds.fan.at(slice(w, 1, j)), y) && tru_b(w[j], y, c);
          }
          if (def) changed |= force(atom_u(id, c), Tri::True);
        }
      }
      for (auto& [k, id] : ds.branch) {
        for (size_t x = 0; x < K; ++x) {
          if (v[atom_u(id, x)] == Tri::True) continue;
          bool def = false;
          for (size_t y = 0; y < K && !def; ++y) {
            if (y == x) continue;
            bool ay = k.which == 1
                          ? tru_b(k.g, x, y) && tru_b(k.t2, y, x) &&
                                tru_u(ds.fan.at(k.wo), y)
                          : tru_b(k.g, y, x) && tru_b(k.t2, x, y) &&
                                tru_u(ds.fan.at(k.wo), y);
            if (!ay) continue;
            for (size_t z = 0; z < K && !def; ++z) {
              if (z == x || z == y) continue;
              if (k.which == 1)
                def = tru_b(k.g, z, y) && tru_b(k.t1, z, y) &&
                      tru_u(ds.fan.at(k.wz), z);
              else
                def = tru_b(k.g, z, x) && tru_b(k.t1, z, x) &&
                      tru_u(ds.fan.at(k.wz), z);
            }
          }
          if (def) changed |= force(atom_u(id, x), Tri::True);
        }
      }
      for (auto& [k, id] : ds.isth) {
        for (size_t x = 0; x < K; ++x) {
          if (v[atom_u(id, x)] == Tri::True) continue;
          bool def = tru_u(ds.fan.at(k.suffix), x) && tru_u(k.inner, x) &&
                     tru_u(ds.fan.at(k.prefix), x);
          for (size_t i = 0; i < k.suffix.size() && !def; ++i)
            for (size_t j = 0; j < k.prefix.size() && !def; ++j) {
              if (!tru_u(ds.fan.at(slice(k.suffix, 0, i)), x) ||
                  !tru_u(ds.fan.at(
                             slice(k.prefix, j + 1, k.prefix.size())),
                         x))
                continue;
              int sub = ds.isth.at(IsthKey{
                  slice(k.suffix, i + 1, k.suffix.size()), k.inner,
                  slice(k.prefix, 0, j)});
              for (size_t y = 0; y < K && !def; ++y)
                def = y != x && tru_b(k.suffix[i], x, y) &&
                      tru_b(k.prefix[j], y, x) && tru_u(sub, y);
            }
          if (def) changed |= force(atom_u(id, x), Tri::True);
        }
      }
      for (auto& [k, id] : ds.fork) {
        int fid = ds.fan.at(k.fanw);
        for (size_t x = 0; x < K; ++x) {
          if (v[atom_u(id, x)] == Tri::True) continue;
          int wit = 0;
          for (size_t y = 0; y < K; ++y) {
            if (y == x) continue;
            bool hit = k.out ? tru_b(k.letter, x, y) && tru_b(f, y, x) &&
                                   tru_u(fid, y)
                             : tru_b(f, y, x) && tru_b(k.letter, y, x) &&
                                   tru_u(fid, y);
            if (hit) ++wit;
          }
          if (wit >= 2) changed |= force(atom_u(id, x), Tri::True);
        }
      }
    }
  }
  return !conflict;
}

bool CompletionIter::config_fires(const std::vector<Tri>& v) const {
  AtomView view;
  view.bin_true = [&](int p, int c, int d) {
    return v[atom_b(p, c, d)] == Tri::True;
  };
  view.bin_false = [&](int p, int c, int d) {
    return v[atom_b(p, c, d)] == Tri::False;
  };
  view.un_true = [&](int p, int c) { return v[atom_u(p, c)] == Tri::True; };
  view.un_false = [&](int p, int c) { return v[atom_u(p, c)] == Tri::False; };
  for (auto& [kappa, ds] : kappas_) {
    (void)kappa;
    if (configs_fire_one(*ds, sig_, view)) return true;
  }
  return false;
}

Database CompletionIter::assemble(const std::vector<Tri>& v) const {
  Database db;
  size_t K = sig_.n_consts();
  int NU = static_cast<int>(sig_.n_unary());
  int NB = static_cast<int>(sig_.n_binary());
  for (int u = 0; u < NU; ++u)
    for (size_t c = 0; c < K; ++c)
      db.add(GroundLit{u, false, static_cast<int>(c), -1,
                       v[atom_u(u, c)] == Tri::True});
  for (int b = 0; b < NB; ++b)
    for (size_t c = 0; c < K; ++c)
      for (size_t d = 0; d < K; ++d)
        db.add(GroundLit{b, true, static_cast<int>(c), static_cast<int>(d),
                         v[atom_b(b, c, d)] == Tri::True});
  return db;
}

int CompletionIter::pick_open(const std::vector<Tri>& v) const {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == Tri::Open) return static_cast<int>(i);
  return -1;
}

std::optional<Database> CompletionIter::next() {
  if (dead_) return std::nullopt;
  while (!stack_.empty()) {
    int phase = stack_.back().second;
    if (phase >= 2) {
      stack_.pop_back();
      continue;
    }
    int a = pick_open(stack_.back().first);
    if (a < 0) {
      if (++yielded_ > limits_.max_completions)
        throw ResourceError("completion limit exceeded");
      Database db = assemble(stack_.back().first);
      stack_.pop_back();
      return db;
    }
    stack_.back().second = phase + 1;
    std::vector<Tri> child = stack_.back().first;
    child[static_cast<size_t>(a)] = phase == 0 ? Tri::True : Tri::False;
    if (propagate(child) && !config_fires(child))
      stack_.emplace_back(std::move(child), 0);
  }
  return std::nullopt;
}

}  // namespace gcdk::pfd_binary
