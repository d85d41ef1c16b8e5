#include "gcdk/typespace.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace gcdk::typespace {

using frontend::Database;
using frontend::F;
using frontend::FK;
using frontend::GroundLit;
using frontend::ResourceError;
using frontend::Signature;
using frontend::UKind;
using frontend::VarX;
using normalform::NormalForm;
using semantics::Structure;

namespace {

// Propositional evaluation of a quantifier- and equality-free two-variable
// formula under a full atom assignment. swap exchanges the roles of x and y,
// so beta(y,x) is eval2(beta, ..., true).
bool eval2(const F& f, const std::vector<uint8_t>& tx,
           const std::vector<uint8_t>& ty, const std::vector<uint8_t>& mixed,
           int nu, bool swap) {
  switch (f->k) {
    case FK::True:
      return true;
    case FK::False:
      return false;
    case FK::Unary: {
      assert(f->a.is_var());
      bool xside = (f->a.var == VarX) != swap;
      return (xside ? tx : ty)[static_cast<size_t>(f->pred)] != 0;
    }
    case FK::Binary: {
      assert(f->a.is_var() && f->b.is_var());
      if (f->a.var == f->b.var) {
        bool xside = (f->a.var == VarX) != swap;
        return (xside ? tx : ty)[static_cast<size_t>(nu + f->pred)] != 0;
      }
      bool fwd = (f->a.var == VarX) != swap;
      return mixed[static_cast<size_t>(2 * f->pred + (fwd ? 0 : 1))] != 0;
    }
    case FK::Not:
      return !eval2(f->l, tx, ty, mixed, nu, swap);
    case FK::And:
      return eval2(f->l, tx, ty, mixed, nu, swap) &&
             eval2(f->r, tx, ty, mixed, nu, swap);
    case FK::Or:
      return eval2(f->l, tx, ty, mixed, nu, swap) ||
             eval2(f->r, tx, ty, mixed, nu, swap);
    case FK::Imp:
      return !eval2(f->l, tx, ty, mixed, nu, swap) ||
             eval2(f->r, tx, ty, mixed, nu, swap);
    case FK::Iff:
      return eval2(f->l, tx, ty, mixed, nu, swap) ==
             eval2(f->r, tx, ty, mixed, nu, swap);
    default:
      throw std::logic_error("non-propositional node under type evaluation");
  }
}

uint64_t spare_cap(const NormalForm& nf) {
  unsigned __int128 mc = (unsigned __int128)nf.counters.size() *
                         (nf.counters.empty() ? 0 : nf.max_count());
  unsigned __int128 cap = mc * mc;
  return cap > ~0ull ? ~0ull : (uint64_t)cap;
}

std::vector<int> spare_slots(const Signature& sig) {
  std::vector<int> out;
  for (int u = 0; u < (int)sig.n_unary(); ++u)
    if (sig.ukind[u] == UKind::Spare) out.push_back(u);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// 1-types

int OneTypeTable::find(const std::vector<uint8_t>& bits) const {
  auto it = std::lower_bound(types.begin(), types.end(), bits);
  if (it == types.end() || *it != bits) return -1;
  return (int)(it - types.begin());
}

OneTypeTable enumerate_one_types(const Signature& sig, const NormalForm& nf,
                                 const TypeLimits& limits) {
  OneTypeTable ot;
  ot.nu = (int)sig.n_unary();
  ot.nb = (int)sig.n_binary();

  // Free slots: every unary, plus the reflexive slot of each non-key binary
  // (taking the canonical half of a converse pair). Key reflexive slots stay
  // zero; converse partners mirror.
  std::vector<int> free;
  for (int u = 0; u < ot.nu; ++u) free.push_back(u);
  for (int b = 0; b < ot.nb; ++b)
    if (!sig.key[b] && (sig.conv[b] < 0 || b < sig.conv[b]))
      free.push_back(ot.nu + b);

  if (free.size() >= 62 || (1ull << free.size()) > limits.max_one_types)
    throw ResourceError("one-type space too large");

  std::vector<int> naming;
  for (int u = 0; u < ot.nu; ++u)
    if (sig.ukind[u] == UKind::Naming) naming.push_back(u);
  std::vector<int> spares = spare_slots(sig);
  uint64_t cap = spare_cap(nf);
  std::vector<uint8_t> zero_mixed((size_t)(2 * ot.nb), 0);

  int fs = (int)free.size();
  for (uint64_t mask = 0; mask < (1ull << fs); ++mask) {
    std::vector<uint8_t> bits((size_t)ot.slots(), 0);
    for (int i = 0; i < fs; ++i)
      bits[(size_t)free[(size_t)i]] = (mask >> (fs - 1 - i)) & 1;
    for (int b = 0; b < ot.nb; ++b)
      if (!sig.key[b] && sig.conv[b] >= 0 && b > sig.conv[b])
        bits[(size_t)(ot.nu + b)] = bits[(size_t)(ot.nu + sig.conv[b])];
    int named = 0;
    for (int u : naming) named += bits[(size_t)u];
    if (named > 1) continue;

    bool ok = eval2(nf.alpha, bits, bits, zero_mixed, ot.nu, false);
    if (ok && !spares.empty()) {
      uint64_t val = 0;
      for (size_t i = 0; i < spares.size(); ++i)
        if (bits[(size_t)spares[i]]) val |= 1ull << i;
      ok = val <= cap;
    }
    ot.types.push_back(std::move(bits));
    ot.viable.push_back(ok ? 1 : 0);
    if (ok) ++ot.n_viable;
  }

  ot.padded = (int)std::bit_ceil(std::max<size_t>(ot.types.size(), 1));
  ot.p = std::countr_zero((unsigned)ot.padded);
  ot.order.reserve(ot.types.size());
  for (int t = 0; t < (int)ot.types.size(); ++t)
    if (ot.viable[(size_t)t]) ot.order.push_back(t);
  for (int t = 0; t < (int)ot.types.size(); ++t)
    if (!ot.viable[(size_t)t]) ot.order.push_back(t);
  ot.pos.assign(ot.types.size(), -1);
  for (int i = 0; i < (int)ot.order.size(); ++i)
    ot.pos[(size_t)ot.order[(size_t)i]] = i;
  return ot;
}

int type_of(const OneTypeTable& ot, const Signature& sig, const Structure& A,
            int e) {
  std::vector<uint8_t> bits((size_t)ot.slots(), 0);
  for (int u = 0; u < ot.nu; ++u) bits[(size_t)u] = A.u(u, e) ? 1 : 0;
  for (int b = 0; b < ot.nb; ++b)
    bits[(size_t)(ot.nu + b)] = A.b(b, e, e) ? 1 : 0;
  (void)sig;
  return ot.find(bits);
}

int type_of_const(const OneTypeTable& ot, const Signature& sig,
                  const Database& completed, int c) {
  std::vector<uint8_t> bits((size_t)ot.slots(), 0);
  for (int u = 0; u < ot.nu; ++u)
    bits[(size_t)u] = completed.contains_pos(u, false, c) ? 1 : 0;
  for (int b = 0; b < ot.nb; ++b)
    bits[(size_t)(ot.nu + b)] = completed.contains_pos(b, true, c, c) ? 1 : 0;
  (void)sig;
  return ot.find(bits);
}

// ---------------------------------------------------------------------------
// 2-types

int TwoTypeTable::find(int start, int end,
                       const std::vector<uint8_t>& mixed) const {
  auto it = std::partition_point(by_key_.begin(), by_key_.end(), [&](int id) {
    const TwoType& t = list[(size_t)id];
    if (t.start != start) return t.start < start;
    if (t.end != end) return t.end < end;
    return t.mixed < mixed;
  });
  if (it == by_key_.end()) return -1;
  const TwoType& t = list[(size_t)*it];
  if (t.start != start || t.end != end || t.mixed != mixed) return -1;
  return *it;
}

TwoTypeTable enumerate_two_types(const Signature& sig, const NormalForm& nf,
                                 const OneTypeTable& ot,
                                 const TypeLimits& limits) {
  TwoTypeTable tt;
  int nb = ot.nb;

  std::vector<int> freem;
  for (int b = 0; b < nb; ++b)
    if (sig.conv[b] < 0 || b < sig.conv[b]) {
      freem.push_back(2 * b);
      freem.push_back(2 * b + 1);
    }
  int fm = (int)freem.size();

  uint64_t nv = (uint64_t)ot.n_viable;
  if (fm >= 40 || (nv * nv) > (limits.max_two_types >> fm))
    throw ResourceError("two-type space too large");

  std::vector<int> opreds;
  for (const auto& oc : nf.counters) opreds.push_back(oc.first);

  tt.inv.assign(ot.types.size(), {});
  tt.noninv.assign(ot.types.size(), {});
  for (size_t si = 0; si < ot.types.size(); ++si) {
    if (!ot.viable[si]) continue;
    int start = (int)si;
    const auto& tx = ot.types[si];
    for (int ep = 0; ep < (int)ot.order.size(); ++ep) {
      int end = ot.order[(size_t)ep];
      if (!ot.viable[(size_t)end]) continue;
      const auto& ty = ot.types[(size_t)end];
      for (uint64_t mask = 0; mask < (1ull << fm); ++mask) {
        TwoType t;
        t.start = start;
        t.end = end;
        t.mixed.assign((size_t)(2 * nb), 0);
        for (int i = 0; i < fm; ++i)
          t.mixed[(size_t)freem[(size_t)i]] = (mask >> (fm - 1 - i)) & 1;
        for (int b = 0; b < nb; ++b)
          if (sig.conv[b] >= 0 && b > sig.conv[b]) {
            t.mixed[(size_t)(2 * b)] = t.mixed[(size_t)(2 * sig.conv[b] + 1)];
            t.mixed[(size_t)(2 * b + 1)] = t.mixed[(size_t)(2 * sig.conv[b])];
          }

        bool fwd = false, bwd = false;
        for (int o : opreds) {
          fwd = fwd || t.mixed[(size_t)(2 * o)];
          bwd = bwd || t.mixed[(size_t)(2 * o + 1)];
        }
        t.cls = fwd ? (bwd ? TypeClass::InvertibleMsg
                           : TypeClass::NonInvertibleMsg)
                    : (bwd ? TypeClass::InverseOnly : TypeClass::Silent);

        bool ok = eval2(nf.alpha, tx, ty, t.mixed, ot.nu, false) &&
                  eval2(nf.alpha, tx, ty, t.mixed, ot.nu, true);
        for (const auto& [e, beta] : nf.universals) {
          if (!ok) break;
          if (t.mixed[(size_t)(2 * e)])
            ok = eval2(beta, tx, ty, t.mixed, ot.nu, false);
          if (ok && t.mixed[(size_t)(2 * e + 1)])
            ok = eval2(beta, tx, ty, t.mixed, ot.nu, true);
        }
        t.forbidden = !ok;

        int id = (int)tt.list.size();
        if (t.cls == TypeClass::InvertibleMsg)
          tt.inv[si].push_back(id);
        else if (t.cls == TypeClass::NonInvertibleMsg)
          tt.noninv[si].push_back(id);
        tt.list.push_back(std::move(t));
      }
    }
  }

  tt.idx_in_inv.assign(tt.list.size(), -1);
  tt.idx_in_noninv.assign(tt.list.size(), -1);
  for (size_t si = 0; si < ot.types.size(); ++si) {
    for (int i = 0; i < (int)tt.inv[si].size(); ++i)
      tt.idx_in_inv[(size_t)tt.inv[si][(size_t)i]] = i;
    for (int i = 0; i < (int)tt.noninv[si].size(); ++i)
      tt.idx_in_noninv[(size_t)tt.noninv[si][(size_t)i]] = i;
  }
  tt.qpad.assign(ot.types.size(), 1);
  tt.qbits.assign(ot.types.size(), 0);
  for (size_t si = 0; si < ot.types.size(); ++si) {
    tt.qpad[si] = (int)std::bit_ceil(std::max<size_t>(tt.noninv[si].size(), 1));
    tt.qbits[si] = std::countr_zero((unsigned)tt.qpad[si]);
  }

  tt.by_key_.resize(tt.list.size());
  for (int i = 0; i < (int)tt.list.size(); ++i) tt.by_key_[(size_t)i] = i;
  std::sort(tt.by_key_.begin(), tt.by_key_.end(), [&](int a, int b) {
    const TwoType& ta = tt.list[(size_t)a];
    const TwoType& tb = tt.list[(size_t)b];
    if (ta.start != tb.start) return ta.start < tb.start;
    if (ta.end != tb.end) return ta.end < tb.end;
    return ta.mixed < tb.mixed;
  });

  tt.inv_of.assign(tt.list.size(), -1);
  std::vector<uint8_t> im;
  for (int i = 0; i < (int)tt.list.size(); ++i) {
    const TwoType& t = tt.list[(size_t)i];
    im.assign(t.mixed.size(), 0);
    for (int b = 0; b < nb; ++b) {
      im[(size_t)(2 * b)] = t.mixed[(size_t)(2 * b + 1)];
      im[(size_t)(2 * b + 1)] = t.mixed[(size_t)(2 * b)];
    }
    tt.inv_of[(size_t)i] = tt.find(t.end, t.start, im);
    assert(tt.inv_of[(size_t)i] >= 0);
  }
  return tt;
}

Vec c_of(const NormalForm& nf, const TwoType& tau) {
  Vec v(nf.counters.size(), 0);
  for (size_t i = 0; i < nf.counters.size(); ++i)
    v[i] = tau.mixed[(size_t)(2 * nf.counters[i].first)];
  return v;
}

// ---------------------------------------------------------------------------
// Index sets and tree strings

std::pair<int, int> interval(const BitStr& s, int bits) {
  assert((int)s.size() <= bits);
  int lo = 0, width = 1 << bits;
  for (uint8_t b : s) {
    width >>= 1;
    if (b) lo += width;
  }
  return {lo, lo + width};
}

BitStr leaf_string(int position, int bits) {
  BitStr s((size_t)bits, 0);
  for (int k = 0; k < bits; ++k)
    s[(size_t)k] = (uint8_t)((position >> (bits - 1 - k)) & 1);
  return s;
}

std::vector<int> lambda_set(const TwoTypeTable& tt, const OneTypeTable& ot,
                            int pi, const BitStr& s) {
  auto [lo, hi] = interval(s, ot.p);
  std::vector<int> out;
  for (int id : tt.inv[(size_t)pi]) {
    int ep = ot.pos[(size_t)tt.list[(size_t)id].end];
    if (ep >= lo && ep < hi) out.push_back(id);
  }
  return out;
}

std::vector<int> m_set(const TwoTypeTable& tt, int pi, const BitStr& t) {
  auto [lo, hi] = interval(t, tt.qbits[(size_t)pi]);
  const auto& row = tt.noninv[(size_t)pi];
  std::vector<int> out;
  for (int i = lo; i < hi && i < (int)row.size(); ++i)
    out.push_back(row[(size_t)i]);
  return out;
}

// ---------------------------------------------------------------------------
// Spectra and tallies

Vec spectrum(const Signature& sig, const NormalForm& nf, const OneTypeTable& ot,
             const Structure& A, int a, const BitStr& s) {
  auto [lo, hi] = interval(s, ot.p);
  Vec v(nf.counters.size(), 0);
  for (int b = 0; b < A.n; ++b) {
    if (b == a) continue;
    bool fwd = false, bwd = false;
    for (const auto& oc : nf.counters) {
      fwd = fwd || A.b(oc.first, a, b);
      bwd = bwd || A.b(oc.first, b, a);
    }
    if (!fwd || !bwd) continue;
    int ty = type_of(ot, sig, A, b);
    assert(ty >= 0);
    int ep = ot.pos[(size_t)ty];
    if (ep < lo || ep >= hi) continue;
    for (size_t i = 0; i < nf.counters.size(); ++i)
      if (A.b(nf.counters[i].first, a, b)) ++v[i];
  }
  return v;
}

Vec tally(const Signature& sig, const NormalForm& nf, const OneTypeTable& ot,
          const TwoTypeTable& tt, const Structure& A, int a, const BitStr& t) {
  int pi = type_of(ot, sig, A, a);
  assert(pi >= 0);
  auto [lo, hi] = interval(t, tt.qbits[(size_t)pi]);
  Vec v(nf.counters.size(), 0);
  std::vector<uint8_t> mixed((size_t)(2 * ot.nb), 0);
  for (int b = 0; b < A.n; ++b) {
    if (b == a) continue;
    bool fwd = false, bwd = false;
    for (const auto& oc : nf.counters) {
      fwd = fwd || A.b(oc.first, a, b);
      bwd = bwd || A.b(oc.first, b, a);
    }
    if (!fwd || bwd) continue;
    for (int bp = 0; bp < ot.nb; ++bp) {
      mixed[(size_t)(2 * bp)] = A.b(bp, a, b) ? 1 : 0;
      mixed[(size_t)(2 * bp + 1)] = A.b(bp, b, a) ? 1 : 0;
    }
    int ty = type_of(ot, sig, A, b);
    assert(ty >= 0);
    int id = tt.find(pi, ty, mixed);
    if (id < 0) continue;  // unviable endpoint: never realized in models
    int idx = tt.idx_in_noninv[(size_t)id];
    assert(idx >= 0);
    if (idx < lo || idx >= hi) continue;
    for (size_t i = 0; i < nf.counters.size(); ++i)
      if (A.b(nf.counters[i].first, a, b)) ++v[i];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Database messages and prefix-closure sets

ConstMsgs db_messages(const Signature& sig, const NormalForm& nf,
                      const OneTypeTable& ot, const TwoTypeTable& tt,
                      const Database& completed, int c) {
  ConstMsgs out;
  int pc = type_of_const(ot, sig, completed, c);
  assert(pc >= 0 && ot.viable[(size_t)pc]);
  std::vector<uint8_t> mixed((size_t)(2 * ot.nb), 0);
  for (int d = 0; d < (int)sig.n_consts(); ++d) {
    if (d == c) continue;
    bool fwd = false, bwd = false;
    for (const auto& oc : nf.counters) {
      fwd = fwd || completed.contains_pos(oc.first, true, c, d);
      bwd = bwd || completed.contains_pos(oc.first, true, d, c);
    }
    if (!fwd) continue;
    for (int bp = 0; bp < ot.nb; ++bp) {
      mixed[(size_t)(2 * bp)] = completed.contains_pos(bp, true, c, d) ? 1 : 0;
      mixed[(size_t)(2 * bp + 1)] =
          completed.contains_pos(bp, true, d, c) ? 1 : 0;
    }
    int pd = type_of_const(ot, sig, completed, d);
    assert(pd >= 0);
    int id = tt.find(pc, pd, mixed);
    assert(id >= 0);
    (bwd ? out.inv : out.noninv).push_back({id, d});
  }
  return out;
}

std::vector<BitStr> cc_of(const BitStr& x) {
  std::vector<BitStr> out;
  out.push_back({});
  for (size_t i = 0; i < x.size(); ++i) {
    BitStr pre(x.begin(), x.begin() + (long)i);
    pre.push_back(0);
    out.push_back(pre);
    pre.back() = 1;
    out.push_back(pre);
  }
  return out;
}

namespace {

void sort_unique(std::vector<BitStr>& v) {
  auto less = [](const BitStr& a, const BitStr& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  };
  std::sort(v.begin(), v.end(), less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

CcSets ccs_cct(const Signature& sig, const NormalForm& nf,
               const OneTypeTable& ot, const TwoTypeTable& tt,
               const Database& completed, int c) {
  ConstMsgs msgs = db_messages(sig, nf, ot, tt, completed, c);
  int pc = type_of_const(ot, sig, completed, c);
  CcSets out;
  for (const DbMsg& m : msgs.inv)
    out.s_c.push_back(leaf_string(ot.pos[(size_t)tt.list[(size_t)m.tau].end], ot.p));
  for (const DbMsg& m : msgs.noninv)
    out.t_c.push_back(
        leaf_string(tt.idx_in_noninv[(size_t)m.tau], tt.qbits[(size_t)pc]));
  sort_unique(out.s_c);
  sort_unique(out.t_c);
  out.ccs.push_back({});
  for (const BitStr& s : out.s_c)
    for (BitStr& e : cc_of(s)) out.ccs.push_back(std::move(e));
  out.cct.push_back({});
  for (const BitStr& t : out.t_c)
    for (BitStr& e : cc_of(t)) out.cct.push_back(std::move(e));
  sort_unique(out.ccs);
  sort_unique(out.cct);
  return out;
}

// ---------------------------------------------------------------------------
// Chromatization

Structure chromatize(const Signature& sig, const NormalForm& nf,
                     const Structure& A, const std::vector<int>& spares) {
  int n = A.n;
  std::vector<std::vector<int>> nbr((size_t)n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      bool fwd = false, bwd = false;
      for (const auto& oc : nf.counters) {
        fwd = fwd || A.b(oc.first, a, b);
        bwd = bwd || A.b(oc.first, b, a);
      }
      if (fwd && bwd) nbr[(size_t)a].push_back(b);
    }

  std::vector<int> color((size_t)n, -1);
  std::vector<char> used;
  for (int a = 0; a < n; ++a) {
    used.assign((size_t)n + 1, 0);
    for (int b : nbr[(size_t)a]) {
      if (color[(size_t)b] >= 0) used[(size_t)color[(size_t)b]] = 1;
      for (int c : nbr[(size_t)b])
        if (c != a && color[(size_t)c] >= 0) used[(size_t)color[(size_t)c]] = 1;
    }
    int k = 0;
    while (used[(size_t)k]) ++k;
    color[(size_t)a] = k;
    if (spares.size() >= 63 || (1ull << spares.size()) <= (uint64_t)k)
      throw std::invalid_argument("spare predicates cannot encode the colors");
  }

  Structure out = A;
  for (size_t i = 0; i < spares.size(); ++i)
    for (int e = 0; e < n; ++e)
      out.set_u(spares[i], e, (color[(size_t)e] >> i) & 1);
  (void)sig;
  return out;
}

}  // namespace gcdk::typespace
