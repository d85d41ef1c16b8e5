#include "gcdk/constraints.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <stdexcept>

namespace gcdk::constraints {

namespace {

using frontend::Database;
using frontend::ResourceError;
using frontend::Signature;
using frontend::UKind;
using normalform::NormalForm;
using semantics::Structure;
using typespace::CcSets;
using typespace::ConstMsgs;
using typespace::OneTypeTable;
using typespace::TwoTypeTable;
using typespace::TypeClass;

bool vec_le(const Vec& a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](uint64_t x) { return x == 0; });
}

bool is_prefix(const BitStr& a, const BitStr& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// All vectors <= bound componentwise, ascending lexicographically.
std::vector<Vec> grid_upto(const Vec& bound) {
  std::vector<Vec> out;
  Vec v(bound.size(), 0);
  for (;;) {
    out.push_back(v);
    size_t i = v.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (v[i] < bound[i]) {
        ++v[i];
        std::fill(v.begin() + i + 1, v.end(), 0);
        break;
      }
      v[i] = 0;
    }
  }
}

// Enumerates assignments of values to a sibling- and prefix-closed string
// set: the root takes each candidate in `roots`, every split distributes the
// parent value over the two children. `forced` pins exact values, `lb` pins
// lower bounds.
void assign_cc(const std::vector<BitStr>& cc, const std::vector<Vec>& roots,
               const std::map<BitStr, Vec>& forced,
               const std::map<BitStr, Vec>& lb, uint64_t cap,
               std::vector<std::map<BitStr, Vec>>& out) {
  std::set<BitStr> in(cc.begin(), cc.end());
  std::vector<BitStr> splits;
  for (const auto& s : cc) {
    BitStr s0 = s;
    s0.push_back(0);
    if (in.count(s0)) splits.push_back(s);
  }
  std::map<BitStr, Vec> cur;
  auto ok_at = [&](const BitStr& s, const Vec& v) {
    auto f = forced.find(s);
    if (f != forced.end() && f->second != v) return false;
    auto l = lb.find(s);
    if (l != lb.end() && !vec_le(l->second, v)) return false;
    return true;
  };
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == splits.size()) {
      if (out.size() >= cap) throw ResourceError("profile enumeration cap hit");
      out.push_back(cur);
      return;
    }
    const BitStr& s = splits[k];
    Vec parent = cur.at(s);
    BitStr s0 = s, s1 = s;
    s0.push_back(0);
    s1.push_back(1);
    for (const Vec& v0 : grid_upto(parent)) {
      Vec v1 = vec_sub(parent, v0);
      if (!ok_at(s0, v0) || !ok_at(s1, v1)) continue;
      cur[s0] = v0;
      cur[s1] = v1;
      rec(k + 1);
      cur.erase(s0);
      cur.erase(s1);
    }
  };
  const BitStr eps;
  for (const Vec& r : roots) {
    if (!ok_at(eps, r)) continue;
    cur[eps] = r;
    rec(0);
    cur.erase(eps);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

bool check_assignment(const LinSys& sys, const std::vector<uint64_t>& x) {
  if ((int)x.size() != sys.n) return false;
  auto sum = [&](const std::vector<int>& vs) {
    unsigned __int128 s = 0;
    for (int v : vs) s += x[v];
    return s;
  };
  for (const auto& [vs, v] : sys.eq)
    if (sum(vs) != x[v]) return false;
  for (const auto& [vs, c] : sys.ge_sum)
    if (sum(vs) < c) return false;
  for (int v : sys.zero)
    if (x[v] != 0) return false;
  for (const auto& [a, b] : sys.eq_var)
    if (x[a] != x[b]) return false;
  for (const auto& [a, vs] : sys.imp)
    if (x[a] > 0 && sum(vs) == 0) return false;
  for (const auto& [a, c] : sys.ge)
    if (x[a] < c) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::map<int, uint64_t> derive_eta(const Signature& sig, const NormalForm& nf,
                                   const OneTypeTable& ot,
                                   const TwoTypeTable& tt,
                                   const Database& completed) {
  std::map<int, uint64_t> eta;
  for (size_t c = 0; c < sig.n_consts(); ++c) {
    ConstMsgs m = typespace::db_messages(sig, nf, ot, tt, completed, (int)c);
    std::set<int> sent;
    for (const auto& d : m.inv) sent.insert(d.tau);
    for (int tau : sent) eta[tau] += 1;
  }
  return eta;
}

// ---------------------------------------------------------------------------

ProfileIter::ProfileIter(const Signature& sig, const NormalForm& nf,
                         const OneTypeTable& ot, const TwoTypeTable& tt,
                         const Database& completed, ProfileLimits lim)
    : cap_(lim.max_profiles) {
  const Vec C = nf.count_vector();
  size_t nc = sig.n_consts();
  per_const_.resize(nc);
  odo_.assign(nc, 0);
  for (size_t c = 0; c < nc; ++c) {
    int pc = typespace::type_of_const(ot, sig, completed, (int)c);
    if (pc < 0 || !ot.viable[pc]) {
      done_ = true;
      return;
    }
  }
  eta_ = derive_eta(sig, nf, ot, tt, completed);
  for (size_t c = 0; c < nc; ++c) {
    CcSets cs = typespace::ccs_cct(sig, nf, ot, tt, completed, (int)c);
    ConstMsgs msgs = typespace::db_messages(sig, nf, ot, tt, completed, (int)c);
    std::map<BitStr, Vec> forcedg, lbg, forcedd, lbd;
    for (const auto& m : msgs.inv) {
      const auto& tau = tt.list[m.tau];
      BitStr s = typespace::leaf_string(ot.pos[tau.end], ot.p);
      Vec cv = typespace::c_of(nf, tau);
      auto [it, fresh] = forcedg.emplace(std::move(s), std::move(cv));
      if (!fresh && it->second != typespace::c_of(nf, tau)) {
        done_ = true;  // two in-database messages force one leaf two ways
        return;
      }
    }
    for (const auto& m : msgs.noninv) {
      const auto& tau = tt.list[m.tau];
      BitStr t = typespace::leaf_string(tt.idx_in_noninv[m.tau],
                                        tt.qbits[tau.start]);
      Vec cv = typespace::c_of(nf, tau);
      auto [it, fresh] = lbd.emplace(std::move(t), cv);
      if (!fresh) it->second = vec_add(it->second, cv);
    }
    std::vector<std::map<BitStr, Vec>> glist;
    assign_cc(cs.ccs, grid_upto(C), forcedg, lbg, cap_, glist);
    for (const auto& g : glist) {
      Vec droot = vec_sub(C, g.at({}));
      std::vector<std::map<BitStr, Vec>> dlist;
      assign_cc(cs.cct, {droot}, forcedd, lbd, cap_, dlist);
      for (auto& d : dlist) {
        if ((uint64_t)per_const_[c].size() >= cap_)
          throw ResourceError("profile enumeration cap hit");
        per_const_[c].push_back({g, std::move(d)});
      }
    }
    if (per_const_[c].empty()) {
      done_ = true;
      return;
    }
  }
}

std::optional<GuessedProfile> ProfileIter::next() {
  if (done_) return std::nullopt;
  if (yielded_ >= cap_) throw ResourceError("profile enumeration cap hit");
  GuessedProfile P;
  P.eta = eta_;
  P.gamma.resize(per_const_.size());
  P.delta.resize(per_const_.size());
  for (size_t c = 0; c < per_const_.size(); ++c) {
    const Assign& a = per_const_[c][odo_[c]];
    P.gamma[c] = a.first;
    P.delta[c] = a.second;
  }
  ++yielded_;
  size_t i = 0;
  for (; i < odo_.size(); ++i) {
    if (++odo_[i] < per_const_[i].size()) break;
    odo_[i] = 0;
  }
  if (i == odo_.size()) done_ = true;
  return P;
}

// ---------------------------------------------------------------------------

int Trie::resolve(const BitStr& s) const {
  if (nodes.empty()) return -1;
  int n = 0;
  for (;;) {
    const TrieNode& N = nodes[n];
    if (is_prefix(s, N.hi)) return n;
    if (!is_prefix(N.hi, s)) return -1;
    if (N.child[0] < 0) return -1;
    n = N.child[(int)(s[N.hi.size()] != 0)];
  }
}

namespace {

struct Emit {
  LinSys* S;
  SystemView* V;
  uint64_t cap;
  int add(VarId id) {
    if ((uint64_t)S->n >= cap)
      throw ResourceError("constraint system too large");
    int ix = S->n++;
    V->ids.push_back(id);
    V->index.emplace(std::move(id), ix);
    return ix;
  }
};

// Builds the compressed trie over the given live leaves, materializes its
// variables, and emits the splitting equalities. Leaves: (full-tree
// position, nonzero achievable values there).
Trie build_trie(Emit& em, VarId::Kind ykind, VarId::Kind hkind, int pi,
                int bits,
                const std::vector<std::pair<int, std::vector<Vec>>>& leaves,
                const Vec& C) {
  Trie tr;
  struct Item {
    BitStr addr;
    int pos;
    const std::vector<Vec>* vals;
  };
  std::vector<Item> items;
  for (const auto& [pos, vals] : leaves)
    items.push_back({typespace::leaf_string(pos, bits), pos, &vals});
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.addr < b.addr; });

  if (items.empty()) {
    TrieNode n;
    n.uset.push_back(Vec(C.size(), 0));
    tr.nodes.push_back(std::move(n));
  } else {
    std::function<int(size_t, size_t, const BitStr&)> rec =
        [&](size_t lo, size_t hi, const BitStr& pfx) -> int {
      int me = (int)tr.nodes.size();
      tr.nodes.emplace_back();
      if (hi - lo == 1) {
        TrieNode n;
        n.lo = pfx;
        n.hi = items[lo].addr;
        n.leaf_pos = items[lo].pos;
        n.uset.push_back(Vec(C.size(), 0));
        for (const Vec& v : *items[lo].vals) n.uset.push_back(v);
        std::sort(n.uset.begin(), n.uset.end());
        n.uset.erase(std::unique(n.uset.begin(), n.uset.end()), n.uset.end());
        tr.nodes[me] = std::move(n);
        return me;
      }
      const BitStr& a = items[lo].addr;
      const BitStr& b = items[hi - 1].addr;
      size_t k = 0;
      while (k < a.size() && a[k] == b[k]) ++k;
      BitStr branch(a.begin(), a.begin() + k);
      size_t mid = lo;
      while (mid < hi && items[mid].addr[k] == 0) ++mid;
      BitStr p0 = branch, p1 = branch;
      p0.push_back(0);
      p1.push_back(1);
      int c0 = rec(lo, mid, p0);
      int c1 = rec(mid, hi, p1);
      TrieNode n;
      n.lo = pfx;
      n.hi = std::move(branch);
      n.child[0] = c0;
      n.child[1] = c1;
      std::set<Vec> us;
      for (const Vec& v : tr.nodes[c0].uset)
        for (const Vec& w : tr.nodes[c1].uset) {
          Vec s = vec_add(v, w);
          if (vec_le(s, C)) {
            n.pairs.push_back({v, w});
            us.insert(std::move(s));
          }
        }
      n.uset.assign(us.begin(), us.end());
      tr.nodes[me] = std::move(n);
      return me;
    };
    rec(0, items.size(), {});
  }

  for (auto& N : tr.nodes) {
    for (const Vec& u : N.uset)
      N.yvar.push_back(em.add({ykind, pi, N.lo, u, {}}));
    for (const auto& [v, w] : N.pairs)
      N.hvar.push_back(em.add({hkind, pi, N.hi, v, w}));
  }

  LinSys& S = *em.S;
  for (const auto& N : tr.nodes) {
    if (N.child[0] < 0) continue;
    const TrieNode& L = tr.nodes[N.child[0]];
    const TrieNode& R = tr.nodes[N.child[1]];
    for (size_t i = 0; i < N.uset.size(); ++i) {
      std::vector<int> terms;
      for (size_t j = 0; j < N.pairs.size(); ++j)
        if (vec_add(N.pairs[j].first, N.pairs[j].second) == N.uset[i])
          terms.push_back(N.hvar[j]);
      S.eq.push_back({std::move(terms), N.yvar[i]});
    }
    for (size_t i = 0; i < L.uset.size(); ++i) {
      std::vector<int> terms;
      for (size_t j = 0; j < N.pairs.size(); ++j)
        if (N.pairs[j].first == L.uset[i]) terms.push_back(N.hvar[j]);
      S.eq.push_back({std::move(terms), L.yvar[i]});
    }
    for (size_t i = 0; i < R.uset.size(); ++i) {
      std::vector<int> terms;
      for (size_t j = 0; j < N.pairs.size(); ++j)
        if (N.pairs[j].second == R.uset[i]) terms.push_back(N.hvar[j]);
      S.eq.push_back({std::move(terms), R.yvar[i]});
    }
  }
  return tr;
}

int find_val(const std::vector<Vec>& uset, const Vec& v) {
  auto it = std::lower_bound(uset.begin(), uset.end(), v);
  if (it != uset.end() && *it == v) return (int)(it - uset.begin());
  return -1;
}

}  // namespace

BuiltSystem build_system(const Signature& sig, const NormalForm& nf,
                         const OneTypeTable& ot, const TwoTypeTable& tt,
                         const Database& completed, const GuessedProfile& prof,
                         SysLimits lim) {
  BuiltSystem B;
  LinSys& S = B.sys;
  SystemView& V = B.view;
  const Vec C = nf.count_vector();
  const int nT = (int)ot.types.size();
  auto infeasible = [&] { S.ge_sum.push_back({{}, 1}); };

  std::vector<int> pic(sig.n_consts());
  for (size_t c = 0; c < sig.n_consts(); ++c) {
    pic[c] = typespace::type_of_const(ot, sig, completed, (int)c);
    if (pic[c] < 0 || !ot.viable[pic[c]]) {
      infeasible();
      return B;
    }
  }

  // Viable types are population-allowed unless they carry naming bits other
  // than a constant's own completed type: models normalize those away.
  std::vector<char> allowed(nT, 0);
  for (int t = 0; t < nT; ++t) {
    if (!ot.viable[t]) continue;
    bool naming = false;
    for (size_t u = 0; u < sig.n_unary(); ++u)
      if (sig.ukind[u] == UKind::Naming && ot.bit(t, (int)u)) {
        naming = true;
        break;
      }
    allowed[t] =
        !naming || std::find(pic.begin(), pic.end(), t) != pic.end();
  }

  auto live_inv = [&](int id) {
    const auto& tau = tt.list[id];
    return tau.cls == TypeClass::InvertibleMsg && !tau.forbidden &&
           tau.start != tau.end && allowed[tau.start] && allowed[tau.end];
  };
  auto live_non = [&](int id) {
    const auto& tau = tt.list[id];
    return tau.cls == TypeClass::NonInvertibleMsg && !tau.forbidden &&
           allowed[tau.start] && allowed[tau.end];
  };

  Emit em{&S, &V, lim.max_vars};

  for (int id = 0; id < (int)tt.list.size(); ++id)
    if (live_inv(id)) V.xvar[id] = em.add({VarId::X, id, {}, {}, {}});
  for (const auto& [id, var] : V.xvar) {
    int j = tt.inv_of[id];
    if (j > id) S.eq_var.push_back({var, V.xvar.at(j)});
  }

  V.ytrie.resize(nT);
  V.ztrie.resize(nT);
  std::vector<std::vector<int>> rooty(nT);
  std::vector<std::pair<int, int>> pending_imp;  // (z variable, landing type)

  for (int t = 0; t < nT; ++t) {
    if (!allowed[t]) continue;

    std::map<int, std::vector<int>> leafx;  // position -> live lambda ids
    for (int id : tt.inv[t])
      if (live_inv(id)) leafx[ot.pos[tt.list[id].end]].push_back(id);
    std::vector<std::pair<int, std::vector<Vec>>> yl;
    for (const auto& [pos, ids] : leafx) {
      std::vector<Vec> vals;
      for (int id : ids) vals.push_back(typespace::c_of(nf, tt.list[id]));
      yl.push_back({pos, std::move(vals)});
    }
    V.ytrie[t] = build_trie(em, VarId::Y, VarId::YH, t, ot.p, yl, C);
    rooty[t] = V.ytrie[t].nodes[0].yvar;

    std::map<int, int> posmu;  // M position -> live mu id
    std::vector<std::pair<int, std::vector<Vec>>> zl;
    for (int id : tt.noninv[t]) {
      if (!live_non(id)) continue;
      Vec cmu = typespace::c_of(nf, tt.list[id]);
      std::vector<Vec> vals;
      Vec v = cmu;
      while (vec_le(v, C)) {
        vals.push_back(v);
        v = vec_add(v, cmu);
      }
      posmu[tt.idx_in_noninv[id]] = id;
      zl.push_back({tt.idx_in_noninv[id], std::move(vals)});
    }
    V.ztrie[t] = build_trie(em, VarId::Z, VarId::ZH, t, tt.qbits[t], zl, C);

    // Leaf law: spectra at a single position are sender counts per C value.
    for (const auto& N : V.ytrie[t].nodes) {
      if (N.leaf_pos < 0) continue;
      const auto& ids = leafx.at(N.leaf_pos);
      for (size_t i = 0; i < N.uset.size(); ++i) {
        if (is_zero(N.uset[i])) continue;
        std::vector<int> terms;
        for (int id : ids)
          if (typespace::c_of(nf, tt.list[id]) == N.uset[i])
            terms.push_back(V.xvar.at(id));
        S.eq.push_back({std::move(terms), N.yvar[i]});
      }
    }

    // Landing implication per non-invertible message leaf.
    for (const auto& N : V.ztrie[t].nodes) {
      if (N.leaf_pos < 0) continue;
      int mu = posmu.at(N.leaf_pos);
      for (size_t i = 0; i < N.uset.size(); ++i)
        if (!is_zero(N.uset[i]))
          pending_imp.push_back({N.yvar[i], tt.list[mu].end});
    }

    // Root pairing: spectrum u pairs with tally C - u.
    const TrieNode& yt = V.ytrie[t].nodes[0];
    const TrieNode& zt = V.ztrie[t].nodes[0];
    for (size_t i = 0; i < yt.uset.size(); ++i) {
      int j = find_val(zt.uset, vec_sub(C, yt.uset[i]));
      if (j >= 0)
        S.eq_var.push_back({yt.yvar[i], zt.yvar[j]});
      else
        S.zero.push_back(yt.yvar[i]);
    }
    for (size_t i = 0; i < zt.uset.size(); ++i)
      if (find_val(yt.uset, vec_sub(C, zt.uset[i])) < 0)
        S.zero.push_back(zt.yvar[i]);
  }

  for (const auto& [zv, end] : pending_imp) S.imp.push_back({zv, rooty[end]});

  std::vector<int> some;
  for (int t = 0; t < nT; ++t)
    some.insert(some.end(), rooty[t].begin(), rooty[t].end());
  S.ge_sum.push_back({std::move(some), 1});

  for (const auto& [lam, k] : prof.eta) {
    auto it = V.xvar.find(lam);
    if (it != V.xvar.end())
      S.ge.push_back({it->second, k});
    else
      infeasible();
  }

  // An element of type t realizing value `val` at real address s must exist.
  auto pin_value_t = [&](const Trie& tr, int t, const BitStr& s,
                         const Vec& val) {
    int nid = tr.resolve(s);
    if (nid < 0) {
      if (is_zero(val))
        S.ge_sum.push_back({rooty[t], 1});
      else
        infeasible();
      return;
    }
    int i = find_val(tr.nodes[nid].uset, val);
    if (i >= 0)
      S.ge.push_back({tr.nodes[nid].yvar[i], 1});
    else
      infeasible();
  };

  auto pin_split = [&](const Trie& tr, int t, const BitStr& s, const Vec& v0,
                       const Vec& v1) {
    int nid = tr.resolve(s);
    if (nid < 0) {
      if (is_zero(v0) && is_zero(v1))
        S.ge_sum.push_back({rooty[t], 1});
      else
        infeasible();
      return;
    }
    const TrieNode& N = tr.nodes[nid];
    if (s == N.hi && N.child[0] >= 0) {
      for (size_t j = 0; j < N.pairs.size(); ++j)
        if (N.pairs[j].first == v0 && N.pairs[j].second == v1) {
          S.ge.push_back({N.hvar[j], 1});
          return;
        }
      infeasible();
      return;
    }
    if (s == N.hi) {
      // a childless node: both subtrees below s lie outside the skeleton
      if (is_zero(v0) && is_zero(v1))
        S.ge_sum.push_back({rooty[t], 1});
      else
        infeasible();
      return;
    }
    // s sits on the chain above N.hi: the off-path side holds no live leaf.
    assert(s.size() < N.hi.size());
    int b = N.hi[s.size()] != 0;
    const Vec& on = b == 0 ? v0 : v1;
    const Vec& off = b == 0 ? v1 : v0;
    if (!is_zero(off)) {
      infeasible();
      return;
    }
    int i = find_val(N.uset, on);
    if (i >= 0)
      S.ge.push_back({N.yvar[i], 1});
    else
      infeasible();
  };

  for (size_t c = 0; c < sig.n_consts(); ++c) {
    int pc = pic[c];
    const auto& g = prof.gamma[c];
    const auto& d = prof.delta[c];
    pin_value_t(V.ytrie[pc], pc, {}, g.at({}));
    pin_value_t(V.ztrie[pc], pc, {}, d.at({}));
    for (const auto& [s0, v0] : g) {
      if (s0.empty() || s0.back() != 0) continue;
      BitStr s(s0.begin(), s0.end() - 1);
      BitStr s1 = s;
      s1.push_back(1);
      pin_split(V.ytrie[pc], pc, s, v0, g.at(s1));
    }
    for (const auto& [t0, v0] : d) {
      if (t0.empty() || t0.back() != 0) continue;
      BitStr t(t0.begin(), t0.end() - 1);
      BitStr t1 = t;
      t1.push_back(1);
      pin_split(V.ztrie[pc], pc, t, v0, d.at(t1));
    }
  }

  return B;
}

// ---------------------------------------------------------------------------

std::vector<uint64_t> extract_counts(const Signature& sig,
                                     const NormalForm& nf,
                                     const OneTypeTable& ot,
                                     const TwoTypeTable& tt,
                                     const Structure& A,
                                     const SystemView& view) {
  std::vector<uint64_t> out(view.ids.size(), 0);
  const int n = A.n;
  std::vector<int> ty(n);
  for (int e = 0; e < n; ++e) ty[e] = typespace::type_of(ot, sig, A, e);
  const size_t nb = sig.n_binary();
  auto two_id = [&](int a, int b) -> int {
    if (ty[a] < 0 || ty[b] < 0) return -1;
    std::vector<uint8_t> mixed(2 * nb, 0);
    for (size_t e = 0; e < nb; ++e) {
      mixed[2 * e] = A.b((int)e, a, b);
      mixed[2 * e + 1] = A.b((int)e, b, a);
    }
    return tt.find(ty[a], ty[b], mixed);
  };
  for (size_t i = 0; i < view.ids.size(); ++i) {
    const VarId& id = view.ids[i];
    if (id.kind == VarId::X) {
      for (int a = 0; a < n; ++a) {
        bool sends = false;
        for (int b = 0; b < n && !sends; ++b)
          if (b != a && two_id(a, b) == id.a) sends = true;
        out[i] += sends;
      }
      continue;
    }
    for (int e = 0; e < n; ++e) {
      if (ty[e] != id.a) continue;
      switch (id.kind) {
        case VarId::Y:
          out[i] += typespace::spectrum(sig, nf, ot, A, e, id.s) == id.u;
          break;
        case VarId::Z:
          out[i] += typespace::tally(sig, nf, ot, tt, A, e, id.s) == id.u;
          break;
        case VarId::YH: {
          BitStr s0 = id.s, s1 = id.s;
          s0.push_back(0);
          s1.push_back(1);
          out[i] += typespace::spectrum(sig, nf, ot, A, e, s0) == id.u &&
                    typespace::spectrum(sig, nf, ot, A, e, s1) == id.v;
          break;
        }
        case VarId::ZH: {
          BitStr t0 = id.s, t1 = id.s;
          t0.push_back(0);
          t1.push_back(1);
          out[i] += typespace::tally(sig, nf, ot, tt, A, e, t0) == id.u &&
                    typespace::tally(sig, nf, ot, tt, A, e, t1) == id.v;
          break;
        }
        default:
          break;
      }
    }
  }
  return out;
}

GuessedProfile profile_of(const Signature& sig, const NormalForm& nf,
                          const OneTypeTable& ot, const TwoTypeTable& tt,
                          const Structure& A, const Database& completed) {
  GuessedProfile P;
  P.eta = derive_eta(sig, nf, ot, tt, completed);
  size_t nc = sig.n_consts();
  P.gamma.resize(nc);
  P.delta.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    int e = A.const_map.at(c);
    CcSets cs = typespace::ccs_cct(sig, nf, ot, tt, completed, (int)c);
    for (const auto& s : cs.ccs)
      P.gamma[c][s] = typespace::spectrum(sig, nf, ot, A, e, s);
    for (const auto& t : cs.cct)
      P.delta[c][t] = typespace::tally(sig, nf, ot, tt, A, e, t);
  }
  return P;
}

}  // namespace gcdk::constraints
