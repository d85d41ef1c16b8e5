#include "gcdk/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>

namespace gcdk::semantics {

using frontend::Cmp;
using frontend::F;
using frontend::FK;
using frontend::Pfd;
using frontend::Problem;
using frontend::ResourceError;
using frontend::Signature;
using frontend::Term;
using frontend::UKind;
using frontend::VarX;

Structure::Structure(const Signature& sig, int n) : n(n) {
  const_map.assign(sig.n_consts(), -1);
  un.assign(sig.n_unary(), std::vector<char>(n, 0));
  bin.assign(sig.n_binary(), std::vector<char>((size_t)n * n, 0));
}

std::vector<char> Structure::active_mask() const {
  std::vector<char> m(n, 0);
  for (int e : const_map)
    if (e >= 0) m[e] = 1;
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

int term_val(const Structure& A, const Term& t, int xv, int yv) {
  if (t.is_const()) return A.const_map[t.cst];
  int v = t.var == VarX ? xv : yv;
  assert(v >= 0 && "unbound variable in evaluation");
  return v;
}

}  // namespace

bool evaluate_at(const Signature& sig, const Structure& A, const F& f, int xv,
                 int yv) {
  switch (f->k) {
    case FK::True:
      return true;
    case FK::False:
      return false;
    case FK::Unary:
      return A.u(f->pred, term_val(A, f->a, xv, yv));
    case FK::Binary:
      return A.b(f->pred, term_val(A, f->a, xv, yv),
                 term_val(A, f->b, xv, yv));
    case FK::Eq:
      return term_val(A, f->a, xv, yv) == term_val(A, f->b, xv, yv);
    case FK::Not:
      return !evaluate_at(sig, A, f->l, xv, yv);
    case FK::And:
      return evaluate_at(sig, A, f->l, xv, yv) &&
             evaluate_at(sig, A, f->r, xv, yv);
    case FK::Or:
      return evaluate_at(sig, A, f->l, xv, yv) ||
             evaluate_at(sig, A, f->r, xv, yv);
    case FK::Imp:
      return !evaluate_at(sig, A, f->l, xv, yv) ||
             evaluate_at(sig, A, f->r, xv, yv);
    case FK::Iff:
      return evaluate_at(sig, A, f->l, xv, yv) ==
             evaluate_at(sig, A, f->r, xv, yv);
    case FK::Forall:
      for (int e = 0; e < A.n; ++e) {
        int nx = f->var == VarX ? e : xv, ny = f->var == VarX ? yv : e;
        if (!evaluate_at(sig, A, f->l, nx, ny)) return false;
      }
      return true;
    case FK::Exists:
      for (int e = 0; e < A.n; ++e) {
        int nx = f->var == VarX ? e : xv, ny = f->var == VarX ? yv : e;
        if (evaluate_at(sig, A, f->l, nx, ny)) return true;
      }
      return false;
    case FK::Count: {
      uint64_t cnt = 0;
      for (int e = 0; e < A.n; ++e) {
        int nx = f->var == VarX ? e : xv, ny = f->var == VarX ? yv : e;
        if (evaluate_at(sig, A, f->guard, nx, ny) &&
            evaluate_at(sig, A, f->l, nx, ny))
          ++cnt;
      }
      switch (f->cmp) {
        case Cmp::Le:
          return cnt <= f->n;
        case Cmp::Ge:
          return cnt >= f->n;
        case Cmp::Eq:
          return cnt == f->n;
      }
      return false;
    }
    case FK::PfdAtom:
      return !check_pfd(sig, A, *f->pfd).has_value();
  }
  return false;
}

bool evaluate(const Signature& sig, const Structure& A, const F& f) {
  return evaluate_at(sig, A, f, -1, -1);
}

std::optional<int> path_image(const Signature& sig, const Structure& A,
                              const std::vector<int>& word, int start) {
  (void)sig;
  int cur = start;
  for (int p : word) {
    int next = -1;
    for (int e = 0; e < A.n; ++e)
      if (A.b(p, cur, e)) {
        next = e;
        break;
      }
    if (next < 0) return std::nullopt;
    cur = next;
  }
  return cur;
}

std::optional<std::pair<int, int>> check_pfd(const Signature& sig,
                                             const Structure& A,
                                             const Pfd& kappa) {
  std::vector<std::optional<int>> li(A.n), ri(A.n);
  for (int e = 0; e < A.n; ++e) {
    li[e] = path_image(sig, A, kappa.left, e);
    if (!kappa.unary()) ri[e] = path_image(sig, A, kappa.right, e);
  }
  for (int a = 0; a < A.n; ++a)
    for (int b = a + 1; b < A.n; ++b) {
      if (!li[a] || !li[b] || *li[a] != *li[b]) continue;
      if (!kappa.unary() && (!ri[a] || !ri[b] || *ri[a] != *ri[b])) continue;
      return std::make_pair(a, b);
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Graph utilities

Graph graph_of(const Signature& sig, const Structure& A) {
  Graph g;
  g.n = A.n;
  g.adj.assign((size_t)A.n * A.n, 0);
  g.active = A.active_mask();
  for (size_t p = 0; p < sig.n_binary(); ++p) {
    if (!sig.key[p]) continue;
    for (int a = 0; a < A.n; ++a)
      for (int b = 0; b < A.n; ++b)
        if (a != b && A.b((int)p, a, b)) {
          g.adj[(size_t)a * A.n + b] = 1;
          g.adj[(size_t)b * A.n + a] = 1;
        }
  }
  for (int a = 0; a < A.n; ++a)
    for (int b = 0; b < A.n; ++b)
      if (a != b && g.active[a] && g.active[b]) g.adj[(size_t)a * A.n + b] = 1;
  return g;
}

namespace {

bool cycle_through(const Graph& g, int v, int cur, std::vector<char>& on,
                   int cnt, int ell) {
  if (cnt >= 3 && g.edge(cur, v)) return true;
  if (cnt == ell) return false;
  for (int w = 0; w < g.n; ++w) {
    if (w == v || on[w] || !g.edge(cur, w)) continue;
    on[w] = 1;
    if (cycle_through(g, v, w, on, cnt + 1, ell)) return true;
    on[w] = 0;
  }
  return false;
}

}  // namespace

bool is_quasi_acyclic(const Graph& g, int ell) {
  for (int v = 0; v < g.n; ++v) {
    if (g.active[v]) continue;
    std::vector<char> on(g.n, 0);
    on[v] = 1;
    if (cycle_through(g, v, v, on, 1, ell)) return false;
  }
  return true;
}

bool route_holds(const Signature& sig, const Structure& A, const Route& r) {
  (void)sig;
  if (!r.tour) {
    if (r.elems.size() != r.word.size() + 1) return false;
    for (size_t i = 0; i < r.word.size(); ++i)
      if (!A.b(r.word[i], r.elems[i], r.elems[i + 1])) return false;
    return true;
  }
  if (r.elems.size() != r.word.size()) return false;
  if (r.elems.empty()) return r.start >= 0 && r.start < A.n;
  if (r.start != r.elems[0]) return false;
  for (size_t i = 0; i < r.word.size(); ++i)
    if (!A.b(r.word[i], r.elems[i], r.elems[(i + 1) % r.elems.size()]))
      return false;
  return true;
}

Activity classify(const Structure& A, const Route& r) {
  auto act = A.active_mask();
  if (r.tour && r.elems.empty())
    return act[r.start] ? Activity::Active : Activity::Passive;
  bool all_a = true, all_p = true;
  for (int e : r.elems) (act[e] ? all_p : all_a) = false;
  if (all_a) return Activity::Active;
  if (all_p) return Activity::Passive;
  return Activity::Mixed;
}

namespace {

void tour_dfs(const Structure& A, const std::vector<int>& word,
              TourFilter filter, const std::vector<char>& act,
              std::vector<int>& elems, std::vector<Route>& out) {
  size_t i = elems.size();
  const size_t ell = word.size();
  if (i == ell) {
    out.push_back(Route{elems, word, true, elems[0]});
    return;
  }
  for (int e = 0; e < A.n; ++e) {
    if (filter == TourFilter::AllActive && !act[e]) continue;
    if (filter == TourFilter::AllPassive && act[e]) continue;
    if (filter == TourFilter::FirstThreeDistinct && i < 3) {
      bool dup = false;
      for (size_t j = 0; j < i; ++j) dup |= elems[j] == e;
      if (dup) continue;
    }
    if (i > 0 && !A.b(word[i - 1], elems[i - 1], e)) continue;
    if (i + 1 == ell && !A.b(word[i], e, i == 0 ? e : elems[0])) continue;
    elems.push_back(e);
    tour_dfs(A, word, filter, act, elems, out);
    elems.pop_back();
  }
}

}  // namespace

std::vector<Route> find_r_tours(const Signature& sig, const Structure& A,
                                const std::vector<int>& word,
                                TourFilter filter) {
  (void)sig;
  std::vector<Route> out;
  if (word.empty()) return out;
  if (filter == TourFilter::FirstThreeDistinct && word.size() < 3) return out;
  auto act = A.active_mask();
  std::vector<int> elems;
  tour_dfs(A, word, filter, act, elems, out);
  return out;
}

Route spine(const Route& walk) {
  assert(!walk.tour && walk.elems.size() == walk.word.size() + 1);
  const auto& a = walk.elems;
  const size_t ell = walk.word.size();
  Route out;
  out.tour = false;
  out.elems.push_back(a[0]);
  size_t iota = 0;
  while (out.elems.back() != a[ell]) {
    size_t next = 0;
    for (size_t j = iota + 1; j <= ell; ++j)
      if (a[j - 1] == out.elems.back()) next = j;
    assert(next > 0);
    out.word.push_back(walk.word[next - 1]);
    out.elems.push_back(a[next]);
    iota = next;
  }
  return out;
}

std::vector<std::pair<int, int>> locus(const Route& r) {
  std::set<std::pair<int, int>> es;
  const auto& e = r.elems;
  if (!r.tour) {
    for (size_t i = 0; i + 1 < e.size(); ++i)
      es.insert(std::minmax(e[i], e[i + 1]));
  } else {
    for (size_t i = 0; i < e.size(); ++i)
      es.insert(std::minmax(e[i], e[(i + 1) % e.size()]));
  }
  return {es.begin(), es.end()};
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  // Returns false if x and y were already connected.
  bool join(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    p[x] = y;
    return true;
  }
};

}  // namespace

bool route_acyclic(const Route& r) {
  auto es = locus(r);
  if (es.empty()) return true;
  int mx = 0;
  for (auto& [a, b] : es) mx = std::max({mx, a, b});
  Dsu d(mx + 1);
  for (auto& [a, b] : es)
    if (!d.join(a, b)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Derived-predicate annotation

namespace {

using pfd_binary::DerivedSignature;
using pfd_binary::Word;

Word slice(const Word& w, size_t from, size_t to) {
  return Word(w.begin() + from, w.begin() + to);
}

}  // namespace

Structure annotate_derived(const Signature& sig, const Structure& A,
                           const DerivedSignature& derived) {
  (void)sig;
  Structure S = A;
  auto fan = [&](const Word& w, int e) {
    int id = derived.fan_id(w);
    assert(id >= 0);
    return S.u(id, e);
  };

  std::vector<Word> fan_words;
  for (auto& [w, id] : derived.fan) fan_words.push_back(w);
  std::sort(fan_words.begin(), fan_words.end(),
            [](const Word& a, const Word& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  for (const Word& w : fan_words) {
    int id = derived.fan_id(w);
    if (w.empty()) {
      std::fill(S.un[id].begin(), S.un[id].end(), 1);
      continue;
    }
    if (w.size() == 1) continue;  // no decomposition: stays false
    for (int e = 0; e < S.n; ++e) {
      bool v = false;
      int r = w[0];
      for (size_t j = 1; j < w.size() && !v; ++j) {
        int s = w[j];
        Word rbar = slice(w, 1, j), sbar = slice(w, j + 1, w.size());
        if (!fan(sbar, e)) continue;
        for (int y = 0; y < S.n && !v; ++y)
          v = y != e && S.b(r, e, y) && fan(rbar, y) && S.b(s, y, e);
      }
      S.set_u(id, e, v);
    }
  }

  for (auto& [k, id] : derived.fork) {
    int f = derived.rot[0];
    for (int e = 0; e < S.n; ++e) {
      int wit = 0;
      for (int u = 0; u < S.n; ++u) {
        if (u == e) continue;
        bool hit = k.out ? S.b(k.letter, e, u) && S.b(f, u, e) && fan(k.fanw, u)
                         : S.b(f, u, e) && S.b(k.letter, u, e) && fan(k.fanw, u);
        if (hit) ++wit;
      }
      S.set_u(id, e, wit >= 2);
    }
  }

  for (auto& [k, id] : derived.branch) {
    for (int e = 0; e < S.n; ++e) {
      bool v = false;
      if (k.which == 1) {
        // e plays x: witnesses y (the shared target) and z.
        for (int y = 0; y < S.n && !v; ++y) {
          if (y == e || !S.b(k.g, e, y) || !S.b(k.t2, y, e) || !fan(k.wo, y))
            continue;
          for (int z = 0; z < S.n && !v; ++z)
            v = z != e && z != y && S.b(k.g, z, y) && S.b(k.t1, z, y) &&
                fan(k.wz, z);
        }
      } else {
        // e plays y: witnesses x and z on either side.
        for (int x = 0; x < S.n && !v; ++x) {
          if (x == e || !S.b(k.g, x, e) || !S.b(k.t2, e, x) || !fan(k.wo, x))
            continue;
          for (int z = 0; z < S.n && !v; ++z)
            v = z != e && z != x && S.b(k.g, z, e) && S.b(k.t1, z, e) &&
                fan(k.wz, z);
        }
      }
      S.set_u(id, e, v);
    }
  }

  std::vector<pfd_binary::IsthKey> ik;
  for (auto& [k, id] : derived.isth) ik.push_back(k);
  std::sort(ik.begin(), ik.end(),
            [](const pfd_binary::IsthKey& a, const pfd_binary::IsthKey& b) {
              size_t la = a.suffix.size() + a.prefix.size();
              size_t lb = b.suffix.size() + b.prefix.size();
              return la != lb ? la < lb : a < b;
            });
  for (const auto& k : ik) {
    int id = derived.isth_id(k);
    for (int e = 0; e < S.n; ++e) {
      bool v = fan(k.suffix, e) && S.u(k.inner, e) && fan(k.prefix, e);
      for (size_t i = 0; i < k.suffix.size() && !v; ++i) {
        Word rp = slice(k.suffix, 0, i);
        Word rpp = slice(k.suffix, i + 1, k.suffix.size());
        if (!fan(rp, e)) continue;
        int r = k.suffix[i];
        for (size_t j = 0; j < k.prefix.size() && !v; ++j) {
          Word spp = slice(k.prefix, 0, j);
          Word sp = slice(k.prefix, j + 1, k.prefix.size());
          if (!fan(sp, e)) continue;
          int s = k.prefix[j];
          int sub = derived.isth_id({rpp, k.inner, spp});
          assert(sub >= 0);
          for (int y = 0; y < S.n && !v; ++y)
            v = y != e && S.b(r, e, y) && S.b(s, y, e) && S.u(sub, y);
        }
      }
      S.set_u(id, e, v);
    }
  }
  return S;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

struct OracleCtx {
  const Problem& p;
  int n;
  uint64_t budget;
  uint64_t used = 0;

  std::vector<int> keys;      // key-base binary ids
  std::vector<int> plain;     // non-key binary ids
  std::vector<int> free_un;   // unary ids enumerated freely

  // Per key, per element: forced successor (-1 open) and forbidden targets.
  std::vector<std::vector<int>> succ_forced;
  std::vector<std::vector<std::vector<char>>> succ_banned;
  // Per plain binary, cell -> 0/1/-1 (open).
  std::vector<std::vector<int>> cell_forced;
  // Per element: forced unary bits over free_un.
  std::vector<uint32_t> un_mask, un_val;

  std::vector<uint32_t> profile;            // chosen free-unary bits
  std::vector<std::vector<int>> succ;       // chosen key successors
  std::vector<std::vector<char>> cells;     // chosen plain extensions

  std::optional<Structure> found;
};

// Maps a literal over a converse predicate to its base-key form.
bool key_cell(const Signature& sig, int pred, int c0, int c1, int& base,
              int& from, int& to) {
  if (!sig.key[pred]) return false;
  if (sig.key_base[pred]) {
    base = pred;
    from = c0;
    to = c1;
  } else {
    base = sig.conv[pred];
    from = c1;
    to = c0;
  }
  return true;
}

bool oracle_prepare(OracleCtx& o) {
  const Signature& sig = o.p.sig;
  for (size_t b = 0; b < sig.n_binary(); ++b) {
    if (sig.key_base[b])
      o.keys.push_back((int)b);
    else if (!sig.key[b])
      o.plain.push_back((int)b);
  }
  for (size_t u = 0; u < sig.n_unary(); ++u)
    if (sig.ukind[u] != UKind::Naming) o.free_un.push_back((int)u);
  if (o.free_un.size() > 20) throw ResourceError("unary space too large");

  o.succ_forced.assign(o.keys.size(), std::vector<int>(o.n, -1));
  o.succ_banned.assign(o.keys.size(),
                       std::vector<std::vector<char>>(
                           o.n, std::vector<char>(o.n, 0)));
  o.cell_forced.assign(o.plain.size(), std::vector<int>((size_t)o.n * o.n, -1));
  o.un_mask.assign(o.n, 0);
  o.un_val.assign(o.n, 0);

  auto key_index = [&](int base) {
    return (int)(std::find(o.keys.begin(), o.keys.end(), base) -
                 o.keys.begin());
  };
  auto plain_index = [&](int pred) {
    return (int)(std::find(o.plain.begin(), o.plain.end(), pred) -
                 o.plain.begin());
  };

  for (const auto& lit : o.p.db.lits) {
    if (lit.binary) {
      int base, from, to;
      if (key_cell(sig, lit.pred, lit.c0, lit.c1, base, from, to)) {
        if (from == to) {
          if (lit.pos) return false;  // irreflexive
          continue;
        }
        auto& f = o.succ_forced[key_index(base)];
        auto& ban = o.succ_banned[key_index(base)];
        if (lit.pos) {
          if (f[from] >= 0 && f[from] != to) return false;
          if (ban[from][to]) return false;
          f[from] = to;
        } else {
          ban[from][to] = 1;
          if (f[from] == to) return false;
        }
      } else {
        auto& cf = o.cell_forced[plain_index(lit.pred)];
        int& cell = cf[(size_t)lit.c0 * o.n + lit.c1];
        int want = lit.pos ? 1 : 0;
        if (cell >= 0 && cell != want) return false;
        cell = want;
      }
    } else {
      if (sig.ukind[lit.pred] == UKind::Naming) {
        bool actual = sig.naming_for[lit.pred] == lit.c0;
        if (actual != lit.pos) return false;
        continue;
      }
      int bit = (int)(std::find(o.free_un.begin(), o.free_un.end(),
                                lit.pred) -
                      o.free_un.begin());
      uint32_t m = 1u << bit;
      uint32_t v = lit.pos ? m : 0;
      if ((o.un_mask[lit.c0] & m) && (o.un_val[lit.c0] & m) != v) return false;
      o.un_mask[lit.c0] |= m;
      o.un_val[lit.c0] = (o.un_val[lit.c0] & ~m) | v;
    }
  }
  return true;
}

bool oracle_leaf(OracleCtx& o) {
  if (++o.used > o.budget)
    throw ResourceError("brute-force search budget exceeded");
  const Signature& sig = o.p.sig;
  Structure A(sig, o.n);
  for (size_t c = 0; c < sig.n_consts(); ++c) A.const_map[c] = (int)c;
  for (size_t u = 0; u < sig.n_unary(); ++u) {
    if (sig.ukind[u] == UKind::Naming) {
      int c = sig.naming_for[u];
      if (c >= 0 && c < o.n) A.set_u((int)u, c, true);
    }
  }
  for (size_t i = 0; i < o.free_un.size(); ++i)
    for (int e = 0; e < o.n; ++e)
      A.set_u(o.free_un[i], e, (o.profile[e] >> i) & 1u);
  for (size_t k = 0; k < o.keys.size(); ++k) {
    int base = o.keys[k], cv = sig.conv[base];
    for (int e = 0; e < o.n; ++e) {
      A.set_b(base, e, o.succ[k][e], true);
      A.set_b(cv, o.succ[k][e], e, true);
    }
  }
  for (size_t i = 0; i < o.plain.size(); ++i)
    for (int a = 0; a < o.n; ++a)
      for (int b = 0; b < o.n; ++b)
        A.set_b(o.plain[i], a, b, o.cells[i][(size_t)a * o.n + b] != 0);

  if (!evaluate(sig, A, o.p.phi)) return false;
  for (const auto& kappa : o.p.pfds)
    if (check_pfd(sig, A, kappa)) return false;
  o.found = A;
  return true;
}

bool oracle_cells(OracleCtx& o, size_t pi, size_t cell) {
  if (pi == o.plain.size()) return oracle_leaf(o);
  if (cell == (size_t)o.n * o.n) return oracle_cells(o, pi + 1, 0);
  int forced = o.cell_forced[pi][cell];
  for (int v = 0; v <= 1; ++v) {
    if (forced >= 0 && v != forced) continue;
    o.cells[pi][cell] = (char)v;
    if (oracle_cells(o, pi, cell + 1)) return true;
  }
  return false;
}

bool oracle_keys(OracleCtx& o, size_t ki, int e) {
  if (ki == o.keys.size()) return oracle_cells(o, 0, 0);
  if (e == o.n) return oracle_keys(o, ki + 1, 0);
  int forced = o.succ_forced[ki][e];
  for (int d = 0; d < o.n; ++d) {
    if (d == e || o.succ_banned[ki][e][d]) continue;
    if (forced >= 0 && d != forced) continue;
    o.succ[ki][e] = d;
    if (oracle_keys(o, ki, e + 1)) return true;
  }
  return false;
}

bool oracle_unary(OracleCtx& o, int e) {
  if (e == o.n) return oracle_keys(o, 0, 0);
  const int k = (int)o.p.sig.n_consts();
  uint32_t lim = 1u << o.free_un.size();
  uint32_t lo = e > k ? o.profile[e - 1] : 0;  // sorted beyond the constants
  for (uint32_t v = lo; v < lim; ++v) {
    if ((v & o.un_mask[e]) != o.un_val[e]) continue;
    o.profile[e] = v;
    if (oracle_unary(o, e + 1)) return true;
  }
  return false;
}

}  // namespace

std::optional<Structure> brute_force_search(const Problem& p, int n_max,
                                            uint64_t budget) {
  if (!p.db.consistent()) return std::nullopt;
  uint64_t used_total = 0;
  for (int n = 1; n <= n_max; ++n) {
    if ((int)p.sig.n_consts() > n) continue;
    // Keys need a distinct successor for every element.
    bool has_key = false;
    for (size_t b = 0; b < p.sig.n_binary(); ++b) has_key |= p.sig.key[b];
    if (n == 1 && has_key) continue;

    OracleCtx o{p, n, budget - used_total};
    if (!oracle_prepare(o)) continue;
    o.profile.assign(n, 0);
    o.succ.assign(o.keys.size(), std::vector<int>(n, -1));
    o.cells.assign(o.plain.size(),
                   std::vector<char>((size_t)n * n, 0));
    if (oracle_unary(o, 0)) return o.found;
    used_total += o.used;
  }
  return std::nullopt;
}

}  // namespace gcdk::semantics
