#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "gcdk/frontend.hpp"
#include "gcdk/pfd_binary.hpp"
#include "gcdk/semantics.hpp"

using namespace gcdk::frontend;
using namespace gcdk::semantics;
using gcdk::pfd_binary::Word;

namespace {

Signature key_sig(int nkeys) {
  Signature s;
  for (int i = 0; i < nkeys; ++i) s.add_key(std::string(1, char('f' + i)));
  return s;
}

// Successor walk in a structure whose key predicates are total functions.
std::vector<int> fn_walk(const Structure& A, const std::vector<int>& word,
                         int start) {
  std::vector<int> out{start};
  for (int p : word) {
    auto next = path_image({}, A, {p}, out.back());
    REQUIRE(next.has_value());
    out.push_back(*next);
  }
  return out;
}

// Critical violation of a binary PFD, straight from its definition.
bool crit_violated(const Structure& A, const Pfd& kappa) {
  const size_t k1 = kappa.left.size();
  for (int a = 0; a < A.n; ++a)
    for (int b = 0; b < A.n; ++b) {
      if (a == b) continue;
      auto wa = fn_walk(A, kappa.left, a), wb = fn_walk(A, kappa.left, b);
      if (wa.back() != wb.back()) continue;
      bool distinct = true;
      for (size_t i = 0; i < k1; ++i) distinct = distinct && wa[i] != wb[i];
      if (!distinct) continue;
      if (fn_walk(A, kappa.right, a).back() ==
          fn_walk(A, kappa.right, b).back())
        return true;
    }
  return false;
}

// All structures over nkeys total irreflexive functions with mirrored
// converses, visited through cb.
template <class CB>
void each_fn_structure(const Signature& sig, int n, int nkeys, CB cb) {
  std::vector<std::vector<int>> succ(nkeys, std::vector<int>(n, 0));
  auto emit = [&]() {
    Structure A(sig, n);
    for (int k = 0; k < nkeys; ++k) {
      int base = 2 * k;
      for (int e = 0; e < n; ++e) {
        A.set_b(base, e, succ[k][e], true);
        A.set_b(base + 1, succ[k][e], e, true);
      }
    }
    cb(A);
  };
  size_t total = 1;
  for (int i = 0; i < nkeys * n; ++i) total *= (size_t)(n - 1);
  for (size_t code = 0; code < total; ++code) {
    size_t c = code;
    for (int k = 0; k < nkeys; ++k)
      for (int e = 0; e < n; ++e) {
        int v = (int)(c % (n - 1));
        c /= (n - 1);
        succ[k][e] = v >= e ? v + 1 : v;
      }
    emit();
  }
}

}  // namespace

TEST_CASE("evaluation handles booleans, quantifiers, and counting") {
  Signature sig;
  int p = sig.add_unary("p");
  int r = sig.add_binary("r");
  Structure A(sig, 3);
  A.set_u(p, 0, true);
  A.set_b(r, 0, 1, true);
  A.set_b(r, 0, 2, true);

  CHECK(evaluate(sig, A, mk_exists(VarX, mk_unary(p, Term::X()))));
  CHECK_FALSE(evaluate(sig, A, mk_forall(VarX, mk_unary(p, Term::X()))));

  F guard = mk_binary(r, Term::X(), Term::Y());
  F c2 = mk_count(Cmp::Eq, 2, VarY, guard, mk_true());
  CHECK(evaluate_at(sig, A, c2, 0, -1));
  CHECK_FALSE(evaluate_at(sig, A, c2, 1, -1));
  CHECK(evaluate_at(sig, A, mk_count(Cmp::Le, 0, VarY, guard, mk_true()), 1, -1));
  CHECK(evaluate_at(sig, A, mk_count(Cmp::Ge, 1, VarX, mk_binary(r, Term::X(), Term::Y()), mk_true()), -1, 1));
  CHECK(evaluate_at(sig, A, mk_eq(Term::X(), Term::Y()), 2, 2));
  CHECK_FALSE(evaluate_at(sig, A, mk_eq(Term::X(), Term::Y()), 1, 2));
}

TEST_CASE("path images and unary pfd checks") {
  Signature sig = key_sig(1);
  Structure A(sig, 3);
  // f(a,c), f(b,c), f(c,a) with a=0, b=1, c=2.
  A.set_b(0, 0, 2, true);
  A.set_b(0, 1, 2, true);
  A.set_b(0, 2, 0, true);

  CHECK(path_image(sig, A, {0}, 0) == 2);
  CHECK(path_image(sig, A, {0, 0}, 0) == 0);
  CHECK_FALSE(path_image(sig, A, {1}, 0).has_value());  // f_inv empty

  auto v = check_pfd(sig, A, Pfd{{0}, {}});
  REQUIRE(v.has_value());
  CHECK(*v == std::make_pair(0, 1));
  CHECK(check_pfd(sig, A, Pfd{{0, 0}, {}}).has_value());

  Structure B(sig, 2);
  B.set_b(0, 0, 1, true);
  B.set_b(0, 1, 0, true);
  CHECK_FALSE(check_pfd(sig, B, Pfd{{0}, {}}).has_value());
}

TEST_CASE("pfd atoms evaluate through the structure") {
  Signature sig = key_sig(1);
  Structure A(sig, 3);
  A.set_b(0, 0, 2, true);
  A.set_b(0, 1, 2, true);
  F atom = mk_pfd_atom(Pfd{{0}, {}});
  CHECK_FALSE(evaluate(sig, A, atom));
  CHECK(evaluate(sig, A, mk_not(atom)));
}

TEST_CASE("quasi-acyclicity sees passive cycles only") {
  Signature sig = key_sig(1);
  sig.add_const("c");
  Structure A(sig, 3);
  A.set_b(0, 0, 1, true);
  A.set_b(0, 1, 2, true);
  A.set_b(0, 2, 0, true);

  A.const_map[0] = -1;  // nobody active: passive triangle
  Graph g = graph_of(sig, A);
  CHECK_FALSE(is_quasi_acyclic(g, 3));
  CHECK(is_quasi_acyclic(g, 2));

  A.const_map[0] = 0;  // one active corner still leaves a passive cycle
  g = graph_of(sig, A);
  CHECK_FALSE(is_quasi_acyclic(g, 3));
}

TEST_CASE("database pairs enter the graph as edges") {
  Signature sig = key_sig(1);
  sig.add_const("a");
  sig.add_const("b");
  Structure A(sig, 4);
  A.const_map[0] = 0;
  A.const_map[1] = 1;
  Graph g = graph_of(sig, A);
  CHECK(g.edge(0, 1));
  CHECK_FALSE(g.edge(0, 2));
  CHECK_FALSE(g.edge(2, 3));
}

TEST_CASE("routes, classification, and the empty tour") {
  Signature sig = key_sig(1);
  sig.add_const("c");
  Structure A(sig, 2);
  A.const_map[0] = 0;
  A.set_b(0, 0, 1, true);
  A.set_b(1, 1, 0, true);

  Route t{{0, 1}, {0, 1}, true, 0};
  CHECK(route_holds(sig, A, t));
  CHECK(classify(A, t) == Activity::Mixed);

  Route empty{{}, {}, true, 1};
  CHECK(route_holds(sig, A, empty));
  CHECK(classify(A, empty) == Activity::Passive);
  empty.start = 0;
  CHECK(classify(A, empty) == Activity::Active);

  Route w{{0, 1}, {0}, false, 0};
  CHECK(route_holds(sig, A, w));
  w.word = {1};
  CHECK_FALSE(route_holds(sig, A, w));
}

TEST_CASE("spine compresses repeated visits") {
  Route walk{{0, 1, 0, 2}, {7, 8, 9}, false, 0};
  Route s = spine(walk);
  CHECK(s.elems == std::vector<int>{0, 2});
  CHECK(s.word == std::vector<int>{9});

  Route trivial{{3}, {}, false, 3};
  Route st = spine(trivial);
  CHECK(st.elems == std::vector<int>{3});
  CHECK(st.word.empty());
}

TEST_CASE("spine of a walk is itself a walk of the structure") {
  Signature sig = key_sig(1);
  Structure A(sig, 3);
  A.set_b(0, 0, 1, true);
  A.set_b(1, 1, 0, true);
  A.set_b(0, 0, 2, true);
  Route walk{{0, 1, 0, 2}, {0, 1, 0}, false, 0};
  REQUIRE(route_holds(sig, A, walk));
  Route s = spine(walk);
  CHECK(route_holds(sig, A, s));
  CHECK(s.elems.front() == walk.elems.front());
  CHECK(s.elems.back() == walk.elems.back());
}

TEST_CASE("locus of the figure tour is a forest") {
  Route tour{{0, 1, 2, 3, 4, 3, 5, 3, 4, 3, 2, 1},
             {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
             true,
             0};
  auto es = locus(tour);
  CHECK(es.size() == 5);
  CHECK(route_acyclic(tour));

  Route tri{{0, 1, 2}, {0, 0, 0}, true, 0};
  CHECK_FALSE(route_acyclic(tri));
}

TEST_CASE("tour enumeration respects word steps and filters") {
  Signature sig = key_sig(1);
  sig.add_const("c");
  Structure A(sig, 2);
  A.set_b(0, 0, 1, true);
  A.set_b(1, 1, 0, true);
  auto tours = find_r_tours(sig, A, {0, 1}, TourFilter::None);
  REQUIRE(tours.size() == 1);
  CHECK(tours[0].elems == std::vector<int>{0, 1});
  CHECK(tours[0].start == 0);
  CHECK(find_r_tours(sig, A, {0}, TourFilter::None).empty());
  CHECK(find_r_tours(sig, A, {0, 1}, TourFilter::FirstThreeDistinct).empty());
  CHECK(find_r_tours(sig, A, {0, 1}, TourFilter::AllPassive).size() == 1);
  A.const_map[0] = 0;
  // With 0 active the tour is mixed: neither all-active nor all-passive.
  CHECK(find_r_tours(sig, A, {0, 1}, TourFilter::AllActive).empty());
  CHECK(find_r_tours(sig, A, {0, 1}, TourFilter::AllPassive).empty());
}

TEST_CASE("retrace law holds on acyclic tours") {
  Signature sig = key_sig(2);
  const std::vector<Word> words = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 0, 1, 1}};
  int checked = 0;
  each_fn_structure(sig, 3, 2, [&](const Structure& A) {
    for (const Word& w : words)
      for (const Route& t : find_r_tours(sig, A, w, TourFilter::None)) {
        if (!route_acyclic(t)) continue;
        const auto& e = t.elems;
        const int L = (int)e.size();
        for (int a = 0; a < A.n; ++a) {
          if (a == e[0]) continue;
          int i = -1, j = -1;
          for (int q = 0; q < L; ++q)
            if (e[q] == a) {
              if (i < 0) i = q;
              j = q;
            }
          if (i < 0) continue;
          ++checked;
          CHECK(e[(j + 1) % L] == e[(i - 1 + L) % L]);
        }
      }
  });
  CHECK(checked > 100);
}

TEST_CASE("critical violations coincide with rotated-word tours") {
  using gcdk::pfd_binary::rotated_word;
  struct Case {
    int nkeys;
    Pfd kappa;
    int n;
  };
  const std::vector<Case> cases = {
      {2, Pfd{{0}, {2}}, 3},    {2, Pfd{{0}, {2}}, 4},
      {2, Pfd{{0, 0}, {2}}, 4}, {2, Pfd{{0}, {2, 2}}, 4},
      {3, Pfd{{2, 0}, {4}}, 3},
  };
  for (const auto& [nkeys, kappa, n] : cases) {
    Signature sig = key_sig(nkeys);
    Word rot = rotated_word(kappa, sig);
    int viol = 0, tours = 0, total = 0;
    each_fn_structure(sig, n, nkeys, [&](const Structure& A) {
      bool lhs = crit_violated(A, kappa);
      bool rhs =
          !find_r_tours(sig, A, rot, TourFilter::FirstThreeDistinct).empty();
      CHECK(lhs == rhs);
      viol += lhs;
      tours += rhs;
      ++total;
    });
    CHECK(viol == tours);
    CHECK(viol > 0);      // the sample exercises both outcomes
    CHECK(viol < total);
  }
}

TEST_CASE("word algebra") {
  using gcdk::pfd_binary::left_prefix_close;
  using gcdk::pfd_binary::rotated_word;
  using gcdk::pfd_binary::word_inverse;
  Signature sig = key_sig(3);  // f=0, g=2, h=4 with converses at +1

  CHECK(word_inverse({0, 2}, sig) == Word{3, 1});
  CHECK(word_inverse(word_inverse({0, 3, 4}, sig), sig) == Word{0, 3, 4});

  CHECK(rotated_word(Pfd{{0}, {2}}, sig) == Word{0, 1, 2, 3});
  CHECK(rotated_word(Pfd{{2, 0}, {4}}, sig) == Word{0, 1, 3, 4, 5, 2});

  auto closed = left_prefix_close({Pfd{{0, 2}, {4}}});
  REQUIRE(closed.size() == 2);
  CHECK(closed[0] == Pfd{{0}, {4}});
  CHECK(closed[1] == Pfd{{0, 2}, {4}});
  CHECK(left_prefix_close({Pfd{{}, {2}}}).empty());
  auto dup = left_prefix_close({Pfd{{0, 2}, {4}}, Pfd{{0}, {4}}});
  CHECK(dup.size() == 2);
}

TEST_CASE("fan annotation matches tour starts on small structures") {
  Signature sig = key_sig(1);
  gcdk::pfd_binary::DerivedSignature ds;
  ds.rot = {0, 1};
  for (const Word& w : {Word{}, Word{0}, Word{1}, Word{0, 1}, Word{1, 0}})
    ds.fan[w] = sig.add_unary("fan" + std::to_string(ds.fan.size()),
                              UKind::Derived);

  Structure A(sig, 2);
  A.set_b(0, 0, 1, true);
  A.set_b(1, 1, 0, true);
  Structure S = annotate_derived(sig, A, ds);
  CHECK(S.u(ds.fan_id({}), 0));
  CHECK(S.u(ds.fan_id({}), 1));
  CHECK(S.u(ds.fan_id({0, 1}), 0));
  CHECK_FALSE(S.u(ds.fan_id({0, 1}), 1));
  CHECK(S.u(ds.fan_id({1, 0}), 1));
  CHECK_FALSE(S.u(ds.fan_id({1, 0}), 0));
  CHECK_FALSE(S.u(ds.fan_id({0}), 0));
  CHECK_FALSE(S.u(ds.fan_id({1}), 1));

  Structure single(sig, 1);
  Structure T = annotate_derived(sig, single, ds);
  CHECK(T.u(ds.fan_id({}), 0));
  CHECK_FALSE(T.u(ds.fan_id({0}), 0));
  CHECK_FALSE(T.u(ds.fan_id({0, 1}), 0));
}

TEST_CASE("branch and isthmus annotation") {
  Signature sig = key_sig(1);
  gcdk::pfd_binary::DerivedSignature ds;
  ds.rot = {0, 1, 0, 1};
  ds.fan[{}] = sig.add_unary("fan_e", UKind::Derived);
  ds.fan[{0}] = sig.add_unary("fan_f", UKind::Derived);
  ds.fan[{1}] = sig.add_unary("fan_fi", UKind::Derived);
  int p = sig.add_unary("p");
  gcdk::pfd_binary::BranchKey b1{1, 0, 0, 1, {}, {}};
  gcdk::pfd_binary::BranchKey b2{2, 0, 0, 1, {}, {}};
  ds.branch[b1] = sig.add_unary("br1", UKind::Derived);
  ds.branch[b2] = sig.add_unary("br2", UKind::Derived);
  gcdk::pfd_binary::IsthKey base{{}, p, {}};
  gcdk::pfd_binary::IsthKey step{{0}, p, {1}};
  ds.isth[base] = sig.add_unary("is0", UKind::Derived);
  ds.isth[step] = sig.add_unary("is1", UKind::Derived);

  Structure A(sig, 3);
  A.set_b(0, 0, 1, true);   // f(0,1)
  A.set_b(0, 2, 1, true);   // f(2,1)
  A.set_b(1, 1, 0, true);   // f_inv mirrors
  A.set_b(1, 1, 2, true);
  A.set_u(p, 1, true);

  Structure S = annotate_derived(sig, A, ds);
  CHECK(S.u(ds.branch_id(b1), 0));
  CHECK(S.u(ds.branch_id(b1), 2));
  CHECK_FALSE(S.u(ds.branch_id(b1), 1));
  CHECK(S.u(ds.branch_id(b2), 1));
  CHECK_FALSE(S.u(ds.branch_id(b2), 0));

  CHECK(S.u(ds.isth_id(base), 1));
  CHECK_FALSE(S.u(ds.isth_id(base), 0));
  CHECK(S.u(ds.isth_id(step), 0));
  CHECK(S.u(ds.isth_id(step), 2));
  CHECK_FALSE(S.u(ds.isth_id(step), 1));
}

TEST_CASE("brute force finds a singleton model for a tautology") {
  Problem p = parse_problem(R"(
sig { unary p; }
phi: forall x (p(x) | ~p(x));
db { }
pfd { }
)");
  auto m = brute_force_search(p, 3);
  REQUIRE(m.has_value());
  CHECK(m->n == 1);
}

TEST_CASE("brute force respects keys, databases, and pfds") {
  Problem p = parse_problem(R"(
sig { key f; const a, b, c; }
phi: true;
db { f(a, c); f(b, c); }
pfd { P[f]; }
)");
  CHECK_FALSE(brute_force_search(p, 5).has_value());

  Problem q = parse_problem(R"(
sig { key f; }
phi: true;
db { }
pfd { P[f]; }
)");
  auto m = brute_force_search(q, 4);
  REQUIRE(m.has_value());
  CHECK(m->n == 2);
  CHECK(m->b(0, 0, 1));
  CHECK(m->b(0, 1, 0));
  CHECK(m->b(1, 0, 1));  // converse mirrored

  Problem r = parse_problem(R"(
sig { key f; const a, b; }
phi: true;
db { f(a, b); ~f_inv(b, a); }
pfd { }
)");
  CHECK_FALSE(brute_force_search(r, 4).has_value());
}

TEST_CASE("brute force misses infinity axioms") {
  Problem p = parse_problem(R"(
sig { unary root; key f; const c; }
phi: forall x (forall y (f(x, y) -> ~root(y)));
db { root(c); }
pfd { P[f]; }
)");
  CHECK_FALSE(brute_force_search(p, 6).has_value());

  // Dropping injectivity restores a finite model.
  Problem q = p;
  q.pfds.clear();
  auto m = brute_force_search(q, 6);
  REQUIRE(m.has_value());
  CHECK(evaluate(q.sig, *m, q.phi));
}

TEST_CASE("brute force reports blown budgets") {
  Problem p = parse_problem(R"(
sig { binary r, s, t; }
phi: forall x (r(x, x) & ~r(x, x));
db { }
pfd { }
)");
  CHECK_THROWS_AS((void)brute_force_search(p, 4, 100), ResourceError);
}
