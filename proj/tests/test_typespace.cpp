#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "gcdk/frontend.hpp"
#include "gcdk/normalform.hpp"
#include "gcdk/semantics.hpp"
#include "gcdk/typespace.hpp"

using namespace gcdk::frontend;
using namespace gcdk::typespace;
using gcdk::normalform::NormalForm;
using gcdk::normalform::to_normal_form;
using gcdk::semantics::brute_force_search;
using gcdk::semantics::Structure;

namespace {

const Term X = Term::X(), Y = Term::Y();

// A hand skeleton: alpha plus one trivial universal and the given counters.
NormalForm skel(F alpha, std::vector<std::pair<int, uint64_t>> counters,
                int guard) {
  NormalForm nf;
  nf.alpha = std::move(alpha);
  nf.universals = {{guard, mk_true()}};
  nf.counters = std::move(counters);
  return nf;
}

Structure seeded(const Signature& sig, int n) {
  Structure A(sig, n);
  for (int c = 0; c < (int)sig.n_consts(); ++c) A.const_map[c] = c;
  return A;
}

Vec add(Vec a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

TEST_CASE("one-type counts for small signatures") {
  Signature sig;
  int p = sig.add_unary("p");
  sig.add_binary("r");
  auto nf = skel(mk_true(), {{1, 1}}, 1);
  auto ot = enumerate_one_types(sig, nf);
  CHECK(ot.types.size() == 4);
  CHECK(ot.n_viable == 4);
  CHECK(ot.padded == 4);
  CHECK(ot.p == 2);
  CHECK(std::is_sorted(ot.types.begin(), ot.types.end()));
  CHECK(ot.bit(3, p) == true);

  Signature sk;
  sk.add_key("f");
  auto otk = enumerate_one_types(sk, skel(mk_true(), {{0, 1}}, 1));
  CHECK(otk.types.size() == 1);
  CHECK(otk.p == 0);
  CHECK(otk.types[0] == std::vector<uint8_t>{0, 0});
}

TEST_CASE("naming predicates are mutually exclusive in types") {
  Signature sig;
  int a = sig.add_const("a");
  int b = sig.add_const("b");
  sig.add_unary("a", UKind::Naming, a);
  sig.add_unary("b", UKind::Naming, b);
  sig.add_unary("p");
  int o = sig.add_binary("o");
  auto ot = enumerate_one_types(sig, skel(mk_true(), {{o, 1}}, o));
  // 3 naming patterns x 2 plain x 2 reflexive
  CHECK(ot.types.size() == 12);
}

TEST_CASE("alpha and the spare palette cap drive viability") {
  Signature sig;
  int p = sig.add_unary("p");
  sig.add_unary("q");
  int o = sig.add_binary("o");
  auto ot =
      enumerate_one_types(sig, skel(mk_unary(p, X), {{o, 1}}, o));
  CHECK(ot.types.size() == 8);
  CHECK(ot.n_viable == 4);
  for (int t = 0; t < 8; ++t) CHECK(ot.viable[t] == (ot.bit(t, p) ? 1 : 0));
  // viable types occupy the first positions, in relative order
  for (int i = 0; i + 1 < (int)ot.order.size(); ++i) {
    bool va = ot.viable[ot.order[i]], vb = ot.viable[ot.order[i + 1]];
    CHECK(va >= vb);
    if (va == vb) CHECK(ot.order[i] < ot.order[i + 1]);
  }
  for (int t = 0; t < 8; ++t) CHECK(ot.order[ot.pos[t]] == t);

  // m = C = 1: spare values above (mC)^2 = 1 are dead colors
  Signature s2;
  s2.add_unary("sp#0", UKind::Spare);
  s2.add_unary("sp#1", UKind::Spare);
  int o2 = s2.add_binary("o");
  auto ot2 = enumerate_one_types(s2, skel(mk_true(), {{o2, 1}}, o2));
  CHECK(ot2.types.size() == 8);
  CHECK(ot2.n_viable == 4);  // spare value in {0,1}, reflexive free
}

TEST_CASE("one-type enumeration respects the limit") {
  Signature sig;
  for (int i = 0; i < 20; ++i) sig.add_unary("u" + std::to_string(i));
  int o = sig.add_binary("o");
  TypeLimits lim;
  lim.max_one_types = 1u << 10;
  CHECK_THROWS_AS(
      enumerate_one_types(sig, skel(mk_true(), {{o, 1}}, o), lim),
      ResourceError);
}

TEST_CASE("type_of reads structures and databases") {
  Signature sig;
  int a = sig.add_const("a");
  int ua = sig.add_unary("a", UKind::Naming, a);
  int ub = sig.add_unary("b", UKind::Naming, sig.add_const("b"));
  int p = sig.add_unary("p");
  int f = sig.add_key("f");
  int o = sig.add_binary("o");
  auto nf = skel(mk_true(), {{o, 1}}, o);
  auto ot = enumerate_one_types(sig, nf);

  Structure A = seeded(sig, 3);
  A.set_u(ua, 0, true);
  A.set_u(ub, 1, true);
  A.set_u(p, 2, true);
  A.set_b(o, 2, 2, true);
  int t2 = type_of(ot, sig, A, 2);
  REQUIRE(t2 >= 0);
  CHECK(ot.bit(t2, p));
  CHECK(ot.bit(t2, ot.nu + o));
  CHECK(!ot.bit(t2, ua));
  CHECK(type_of(ot, sig, A, 0) != type_of(ot, sig, A, 1));

  // structurally inconsistent bits have no type
  A.set_u(ub, 0, true);
  CHECK(type_of(ot, sig, A, 0) == -1);
  A.set_u(ub, 0, false);
  A.set_b(f, 1, 1, true);
  CHECK(type_of(ot, sig, A, 1) == -1);

  Database db;
  db.add({ua, false, 0, -1, true});
  db.add({p, false, 0, -1, true});
  db.add({o, true, 0, 0, true});
  int tc = type_of_const(ot, sig, db, 0);
  REQUIRE(tc >= 0);
  CHECK(ot.bit(tc, ua));
  CHECK(ot.bit(tc, p));
  CHECK(ot.bit(tc, ot.nu + o));
}

TEST_CASE("two-type classification and converses") {
  Signature sig;
  int o = sig.add_binary("o");
  int r = sig.add_binary("r");
  auto nf = skel(mk_true(), {{o, 1}}, r);
  auto ot = enumerate_one_types(sig, nf);
  CHECK(ot.types.size() == 4);
  auto tt = enumerate_two_types(sig, nf, ot);
  // 4 starts x 4 ends x 16 mixed
  CHECK(tt.list.size() == 256);

  int sent = 0, inv = 0, noninv = 0, invonly = 0;
  for (const auto& t : tt.list) {
    bool fwd = t.mixed[2 * o], bwd = t.mixed[2 * o + 1];
    switch (t.cls) {
      case TypeClass::InvertibleMsg:
        CHECK(fwd);
        CHECK(bwd);
        ++inv;
        break;
      case TypeClass::NonInvertibleMsg:
        CHECK(fwd);
        CHECK(!bwd);
        ++noninv;
        break;
      case TypeClass::InverseOnly:
        CHECK(!fwd);
        CHECK(bwd);
        ++invonly;
        break;
      case TypeClass::Silent:
        CHECK(!fwd);
        CHECK(!bwd);
        ++sent;
        break;
    }
  }
  CHECK(inv == 64);
  CHECK(noninv == 64);
  CHECK(invonly == 64);
  CHECK(sent == 64);

  for (int id = 0; id < (int)tt.list.size(); ++id) {
    int j = tt.inv_of[id];
    REQUIRE(j >= 0);
    CHECK(tt.inv_of[j] == id);
    CHECK(tt.list[j].start == tt.list[id].end);
    CHECK(tt.list[j].end == tt.list[id].start);
    CHECK(tt.list[j].mixed[2 * o] == tt.list[id].mixed[2 * o + 1]);
    CHECK(tt.find(tt.list[id].start, tt.list[id].end, tt.list[id].mixed) ==
          id);
  }

  // forbidden: a universal contradicting its own guard kills the guard bit
  auto nf2 = skel(mk_true(), {{o, 1}}, r);
  nf2.universals = {{o, mk_not(mk_binary(o, X, Y))}};
  auto tt2 = enumerate_two_types(sig, nf2, ot);
  for (const auto& t : tt2.list)
    CHECK(t.forbidden == (t.mixed[2 * o] || t.mixed[2 * o + 1]));

  // alpha on both endpoints
  Signature s3;
  int p3 = s3.add_unary("p");
  int o3 = s3.add_binary("o");
  auto nf3 = skel(mk_unary(p3, X), {{o3, 1}}, o3);
  auto ot3 = enumerate_one_types(s3, nf3);
  auto tt3 = enumerate_two_types(s3, nf3, ot3);
  for (const auto& t : tt3.list) {
    CHECK(ot3.viable[t.start]);
    CHECK(ot3.viable[t.end]);
    CHECK(!t.forbidden);
  }
}

TEST_CASE("converse-linked mixed bits stay tied") {
  Signature sig;
  int f = sig.add_key("f");
  int fi = sig.conv[f];
  auto nf = skel(mk_true(), {{f, 1}}, f);
  auto ot = enumerate_one_types(sig, nf);
  CHECK(ot.types.size() == 1);
  auto tt = enumerate_two_types(sig, nf, ot);
  CHECK(tt.list.size() == 4);  // two free mixed bits
  for (const auto& t : tt.list) {
    CHECK(t.mixed[2 * fi] == t.mixed[2 * f + 1]);
    CHECK(t.mixed[2 * fi + 1] == t.mixed[2 * f]);
  }
}

TEST_CASE("interval halving and leaf strings") {
  CHECK(interval({}, 3) == std::pair<int, int>{0, 8});
  CHECK(interval({0}, 3) == std::pair<int, int>{0, 4});
  CHECK(interval({1}, 3) == std::pair<int, int>{4, 8});
  CHECK(interval({1, 0, 1}, 3) == std::pair<int, int>{5, 6});
  for (int pos = 0; pos < 8; ++pos) {
    BitStr s = leaf_string(pos, 3);
    CHECK(interval(s, 3) == std::pair<int, int>{pos, pos + 1});
  }
}

TEST_CASE("index sets split along the trees") {
  Signature sig;
  sig.add_unary("p");
  sig.add_unary("q");
  int o = sig.add_binary("o");
  int r = sig.add_binary("r");
  auto nf = skel(mk_true(), {{o, 2}}, r);
  auto ot = enumerate_one_types(sig, nf);
  CHECK(ot.p == 4);
  auto tt = enumerate_two_types(sig, nf, ot);

  for (int pi = 0; pi < (int)ot.types.size(); ++pi) {
    if (!ot.viable[pi]) continue;
    CHECK(lambda_set(tt, ot, pi, {}) == tt.inv[pi]);
    CHECK(m_set(tt, pi, {}) == tt.noninv[pi]);
    std::vector<BitStr> level = {{}};
    for (int d = 0; d < ot.p; ++d) {
      std::vector<BitStr> next;
      for (const BitStr& s : level) {
        BitStr s0 = s, s1 = s;
        s0.push_back(0);
        s1.push_back(1);
        auto l = lambda_set(tt, ot, pi, s);
        auto l0 = lambda_set(tt, ot, pi, s0);
        auto l1 = lambda_set(tt, ot, pi, s1);
        l0.insert(l0.end(), l1.begin(), l1.end());
        CHECK(l == l0);  // disjoint split preserving order
        next.push_back(std::move(s0));
        next.push_back(std::move(s1));
      }
      level = std::move(next);
    }
    // leaves of the M tree are single types or empty padding
    for (int i = 0; i < tt.qpad[pi]; ++i) {
      auto ms = m_set(tt, pi, leaf_string(i, tt.qbits[pi]));
      CHECK(ms.size() == (i < (int)tt.noninv[pi].size() ? 1u : 0u));
    }
    std::vector<BitStr> tlevel = {{}};
    for (int d = 0; d < tt.qbits[pi]; ++d) {
      std::vector<BitStr> next;
      for (const BitStr& t : tlevel) {
        BitStr t0 = t, t1 = t;
        t0.push_back(0);
        t1.push_back(1);
        auto m = m_set(tt, pi, t);
        auto m0 = m_set(tt, pi, t0);
        auto m1 = m_set(tt, pi, t1);
        m0.insert(m0.end(), m1.begin(), m1.end());
        CHECK(m == m0);
        next.push_back(std::move(t0));
        next.push_back(std::move(t1));
      }
      tlevel = std::move(next);
    }
  }

  // leaf lambda sets: all members share the end type at that position
  for (int pi = 0; pi < (int)ot.types.size(); ++pi) {
    if (!ot.viable[pi]) continue;
    for (int pos = 0; pos < ot.padded; ++pos) {
      auto ls = lambda_set(tt, ot, pi, leaf_string(pos, ot.p));
      for (int id : ls) CHECK(ot.pos[tt.list[id].end] == pos);
    }
  }
}

TEST_CASE("c vectors read the counting bits") {
  Signature sig;
  int o1 = sig.add_binary("o1");
  int o2 = sig.add_binary("o2");
  NormalForm nf = skel(mk_true(), {{o1, 1}, {o2, 2}}, o1);
  auto ot = enumerate_one_types(sig, nf);
  auto tt = enumerate_two_types(sig, nf, ot);
  for (const auto& t : tt.list) {
    Vec v = c_of(nf, t);
    CHECK(v == Vec{t.mixed[2 * o1], t.mixed[2 * o2]});
  }
}

TEST_CASE("spectrum plus tally covers every message") {
  Signature sig;
  int o = sig.add_binary("o");
  auto nf = skel(mk_true(), {{o, 2}}, o);
  auto ot = enumerate_one_types(sig, nf);
  auto tt = enumerate_two_types(sig, nf, ot);

  // complete symmetric o on 3 elements: everything invertible
  Structure A = seeded(sig, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) A.set_b(o, a, b, true);
  for (int a = 0; a < 3; ++a) {
    CHECK(spectrum(sig, nf, ot, A, a, {}) == Vec{2});
    CHECK(tally(sig, nf, ot, tt, A, a, {}) == Vec{0});
  }

  // directed 3-cycle with C=1: everything non-invertible
  auto nf1 = skel(mk_true(), {{o, 1}}, o);
  Structure B = seeded(sig, 3);
  B.set_b(o, 0, 1, true);
  B.set_b(o, 1, 2, true);
  B.set_b(o, 2, 0, true);
  for (int a = 0; a < 3; ++a) {
    CHECK(spectrum(sig, nf1, ot, B, a, {}) == Vec{0});
    CHECK(tally(sig, nf1, ot, tt, B, a, {}) == Vec{1});
  }
}

TEST_CASE("spectrum and tally split like their trees") {
  Signature sig;
  sig.add_unary("p");
  int o = sig.add_binary("o");
  int r = sig.add_binary("r");
  auto nf = skel(mk_true(), {{o, 2}}, r);
  auto ot = enumerate_one_types(sig, nf);
  auto tt = enumerate_two_types(sig, nf, ot);

  std::mt19937 rng(77);
  for (int iter = 0; iter < 25; ++iter) {
    int n = 2 + (int)(rng() % 5);
    Structure A = seeded(sig, n);
    for (int u = 0; u < (int)sig.n_unary(); ++u)
      for (int e = 0; e < n; ++e) A.set_u(u, e, rng() % 2);
    for (int b = 0; b < (int)sig.n_binary(); ++b)
      for (int e = 0; e < n; ++e)
        for (int f = 0; f < n; ++f)
          if (e != f) A.set_b(b, e, f, rng() % 3 == 0);

    for (int a = 0; a < n; ++a) {
      std::vector<BitStr> level = {{}};
      for (int d = 0; d < ot.p; ++d) {
        std::vector<BitStr> next;
        for (const BitStr& s : level) {
          BitStr s0 = s, s1 = s;
          s0.push_back(0);
          s1.push_back(1);
          CHECK(spectrum(sig, nf, ot, A, a, s) ==
                add(spectrum(sig, nf, ot, A, a, s0),
                    spectrum(sig, nf, ot, A, a, s1)));
          next.push_back(std::move(s0));
          next.push_back(std::move(s1));
        }
        level = std::move(next);
      }
      int pi = type_of(ot, sig, A, a);
      REQUIRE(pi >= 0);
      std::vector<BitStr> tlevel = {{}};
      for (int d = 0; d < tt.qbits[pi]; ++d) {
        std::vector<BitStr> next;
        for (const BitStr& t : tlevel) {
          BitStr t0 = t, t1 = t;
          t0.push_back(0);
          t1.push_back(1);
          CHECK(tally(sig, nf, ot, tt, A, a, t) ==
                add(tally(sig, nf, ot, tt, A, a, t0),
                    tally(sig, nf, ot, tt, A, a, t1)));
          next.push_back(std::move(t0));
          next.push_back(std::move(t1));
        }
        tlevel = std::move(next);
      }
    }
  }
}

TEST_CASE("models of a normal form have full count vectors") {
  Signature sig;
  sig.add_unary("p");
  sig.add_binary("r");
  auto phi = parse_problem(
                 "sig { unary p; binary r; }\n"
                 "phi: forall x (exists =1 y (r(x, y) & x != y));\n"
                 "db { } pfd { }")
                 .phi;
  auto [nf, ext] = to_normal_form(phi, sig);
  Problem q;
  q.sig = ext;
  q.phi = nf.to_formula();
  auto model = brute_force_search(q, 4);
  REQUIRE(model.has_value());

  auto ot = enumerate_one_types(ext, nf);
  auto tt = enumerate_two_types(ext, nf, ot);
  Vec cv = nf.count_vector();
  for (int a = 0; a < model->n; ++a) {
    int pi = type_of(ot, ext, *model, a);
    REQUIRE(pi >= 0);
    CHECK(ot.viable[pi]);
    CHECK(add(spectrum(ext, nf, ot, *model, a, {}),
              tally(ext, nf, ot, tt, *model, a, {})) == cv);
  }
}

TEST_CASE("prefix-closure sets of leaf strings") {
  BitStr x = {0, 1, 0, 1};
  auto cc = cc_of(x);
  std::vector<BitStr> want = {{},     {0},       {1},    {0, 0},      {0, 1},
                              {0, 1, 0}, {0, 1, 1}, {0, 1, 0, 0}, {0, 1, 0, 1}};
  CHECK(cc == want);

  std::mt19937 rng(5);
  for (int iter = 0; iter < 30; ++iter) {
    BitStr s((size_t)(rng() % 7), 0);
    for (auto& b : s) b = rng() % 2;
    auto c = cc_of(s);
    std::set<BitStr> uniq(c.begin(), c.end());
    CHECK(c.size() == 2 * s.size() + 1);
    CHECK(uniq.size() == c.size());
    CHECK(uniq.count(s) == 1);
    CHECK(uniq.count({}) == 1);
  }
}

TEST_CASE("database messages and closure sets") {
  Signature sig;
  int ca = sig.add_const("a");
  int cb = sig.add_const("b");
  int cc = sig.add_const("c");
  int o = sig.add_binary("o");
  auto nf = skel(mk_true(), {{o, 1}}, o);
  auto ot = enumerate_one_types(sig, nf);
  CHECK(ot.types.size() == 2);
  CHECK(ot.p == 1);
  auto tt = enumerate_two_types(sig, nf, ot);

  Database db;
  db.add({o, true, ca, cb, true});
  db.add({o, true, cb, ca, true});
  db.add({o, true, ca, cc, true});

  auto ma = db_messages(sig, nf, ot, tt, db, ca);
  REQUIRE(ma.inv.size() == 1);
  REQUIRE(ma.noninv.size() == 1);
  CHECK(ma.inv[0].to == cb);
  CHECK(ma.noninv[0].to == cc);
  CHECK(tt.list[ma.inv[0].tau].cls == TypeClass::InvertibleMsg);
  CHECK(tt.list[ma.noninv[0].tau].cls == TypeClass::NonInvertibleMsg);

  auto mb = db_messages(sig, nf, ot, tt, db, cb);
  CHECK(mb.inv.size() == 1);
  CHECK(mb.noninv.empty());
  CHECK(tt.inv_of[mb.inv[0].tau] == ma.inv[0].tau);

  auto mc = db_messages(sig, nf, ot, tt, db, cc);
  CHECK(mc.inv.empty());
  CHECK(mc.noninv.empty());  // receives only

  auto sa = ccs_cct(sig, nf, ot, tt, db, ca);
  REQUIRE(sa.s_c.size() == 1);
  REQUIRE(sa.t_c.size() == 1);
  CHECK(sa.s_c[0].size() == (size_t)ot.p);
  std::vector<BitStr> both = {{}, {0}, {1}};
  CHECK(sa.ccs == both);
  CHECK(sa.cct == both);

  auto sc = ccs_cct(sig, nf, ot, tt, db, cc);
  CHECK(sc.ccs == std::vector<BitStr>{{}});
  CHECK(sc.cct == std::vector<BitStr>{{}});

  // leaf strings locate the receiving type in the trees
  auto ls = lambda_set(tt, ot, type_of_const(ot, sig, db, ca), sa.s_c[0]);
  CHECK(std::count(ls.begin(), ls.end(), ma.inv[0].tau) == 1);
  auto ms = m_set(tt, type_of_const(ot, sig, db, ca), sa.t_c[0]);
  CHECK(std::count(ms.begin(), ms.end(), ma.noninv[0].tau) == 1);
}

TEST_CASE("chromatization separates invertible partners") {
  Signature sig;
  sig.add_unary("p");
  int o = sig.add_binary("o");
  std::vector<int> spares;
  for (int i = 0; i < 3; ++i)
    spares.push_back(sig.add_unary("sp#" + std::to_string(i), UKind::Spare));
  auto nf = skel(mk_true(), {{o, 2}}, o);
  auto ot = enumerate_one_types(sig, nf);

  std::mt19937 rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    int n = 2 + (int)(rng() % 7);
    Structure A = seeded(sig, n);
    for (int e = 0; e < n; ++e) A.set_u(0, e, rng() % 2);
    for (int e = 0; e < n; ++e)
      for (int f = 0; f < n; ++f)
        if (e != f) A.set_b(o, e, f, rng() % 3 == 0);

    Structure B = chromatize(sig, nf, A, spares);
    // only spare rows may change
    for (int e = 0; e < n; ++e) {
      CHECK(B.u(0, e) == A.u(0, e));
      for (int f = 0; f < n; ++f) CHECK(B.b(o, e, f) == A.b(o, e, f));
    }

    auto invp = [&](int a, int b) { return A.b(o, a, b) && A.b(o, b, a); };
    auto ty = [&](int e) { return type_of(ot, sig, B, e); };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || !invp(a, b)) continue;
        CHECK(ty(a) != ty(b));
        for (int c = 0; c < n; ++c)
          if (c != a && c != b && invp(a, c)) CHECK(ty(b) != ty(c));
      }
  }

  // no invertible messages: everything keeps color zero
  Structure C0 = seeded(sig, 4);
  C0.set_b(o, 0, 1, true);
  C0.set_b(o, 2, 3, true);
  Structure D = chromatize(sig, nf, C0, spares);
  for (int s : spares)
    for (int e = 0; e < 4; ++e) CHECK(!D.u(s, e));

  // a triangle of invertible pairs needs three colors
  Structure T = seeded(sig, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) T.set_b(o, a, b, true);
  CHECK_THROWS_AS(chromatize(sig, nf, T, {}), std::invalid_argument);
  Structure T2 = chromatize(sig, nf, T, spares);
  CHECK(type_of(ot, sig, T2, 0) != type_of(ot, sig, T2, 1));
  CHECK(type_of(ot, sig, T2, 1) != type_of(ot, sig, T2, 2));
  CHECK(type_of(ot, sig, T2, 0) != type_of(ot, sig, T2, 2));
}

TEST_CASE("two-type enumeration respects the limit") {
  Signature sig;
  sig.add_unary("p");
  int o = sig.add_binary("o");
  sig.add_binary("r");
  auto nf = skel(mk_true(), {{o, 1}}, o);
  auto ot = enumerate_one_types(sig, nf);
  TypeLimits lim;
  lim.max_two_types = 16;
  CHECK_THROWS_AS(enumerate_two_types(sig, nf, ot, lim), ResourceError);
}
