#include <random>

#include "doctest.h"
#include "motivic/sieve.hpp"

using namespace motivic;

namespace {

SchemePtr scheme(const Field& f, std::vector<std::string> vars, std::vector<const char*> gens = {},
                 std::string name = "X") {
  PolyRing r(f, std::move(vars));
  std::vector<Poly> g;
  for (auto s : gens) g.push_back(parse_poly(s, r));
  return std::make_shared<const AffineScheme>(name, Ideal(r, g));
}

FatPointPtr jet(const Field& f, unsigned n) { return std::make_shared<const FatPoint>(FatPoint::jet(f, n)); }
FatPointPtr pt(const Field& f) { return std::make_shared<const FatPoint>(FatPoint::spec_k(f)); }

Poly P(const SchemePtr& x, const char* text) { return parse_poly(text, x->ring()); }
SieveExpr V(const SchemePtr& x, const char* text) { return SieveExpr::closed(x, {P(x, text)}); }
SieveExpr D(const SchemePtr& x, const char* text) { return SieveExpr::open(x, P(x, text)); }

// Oracle: exact membership on every point of the ambient.
std::set<std::string> oracle_points(const SieveExpr& s, const FatPointPtr& m) {
  std::set<std::string> out;
  for (const auto& p : points(*s.ambient(), m))
    if (member(p, s)) out.insert(to_string(p));
  return out;
}

std::set<std::string> listed(const SieveExpr& s, const FatPointPtr& m) {
  std::set<std::string> out;
  for (const auto& p : points(s, m)) out.insert(to_string(p));
  return out;
}

}  // namespace

TEST_CASE("membership examples") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto m = jet(f2, 2);
  const auto& alg = m->algebra();
  SchemePoint t{m, {alg.coordinates(parse_poly("t", alg.ring()))}};
  SchemePoint one_t{m, {alg.coordinates(parse_poly("1 + t", alg.ring()))}};
  CHECK_FALSE(member(t, D(a1, "x")));
  CHECK(member(one_t, D(a1, "x")));
  CHECK(member(t, SieveExpr::full(a1)));
  CHECK_FALSE(member(t, SieveExpr::empty(a1)));
  CHECK(member(t, V(a1, "x^2")));
  CHECK_FALSE(member(t, V(a1, "x")));
  auto q = Field::rationals();
  auto qa = scheme(q, {"x"});
  auto qm = jet(q, 2);
  SchemePoint qp{qm, {qm->algebra().coordinates(parse_poly("2 + t", qm->algebra().ring()))}};
  CHECK(member(qp, D(qa, "x")));
  auto ident = SieveExpr::image(Morphism::identity(qa));
  CHECK_THROWS_AS(member(qp, ident), Error);
}

TEST_CASE("lattice counts") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto k = pt(f2);
  CHECK(count(V(a1, "x") | V(a1, "x - 1"), k) == 2);
  auto f3 = Field::prime(3);
  auto b1 = scheme(f3, {"x"});
  auto full = SieveExpr::full(b1);
  auto prod = product(full, full);
  CHECK(count(prod.sieve, pt(f3)) == 9);
  auto s = V(b1, "x^2 - 1");
  CHECK(listed(SieveExpr::full(b1) & s, jet(f3, 2)) == listed(s, jet(f3, 2)));
  CHECK_THROWS_AS(s | V(a1, "x"), Error);
}

TEST_CASE("enumeration agrees with the exact oracle") {
  auto f3 = Field::prime(3);
  auto x = scheme(f3, {"x", "y"}, {"x*y - y"});
  auto m = jet(f3, 2);
  auto phi = Morphism(scheme(f3, {"u"}, {}, "Z"), x, {parse_poly("1", PolyRing(f3, {"u"})), parse_poly("u^2", PolyRing(f3, {"u"}))});
  std::vector<SieveExpr> leaves{V(x, "x - 1"), V(x, "y"), D(x, "x"), D(x, "y + 1"), SieveExpr::image(phi),
                                SieveExpr::full(x)};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    SieveExpr s = leaves[rng() % leaves.size()];
    for (int k = 0; k < 3; ++k) {
      const auto& l = leaves[rng() % leaves.size()];
      s = (rng() % 2) ? (s | l) : (s & l);
    }
    CHECK(listed(s, m) == oracle_points(s, m));
  }
}

TEST_CASE("inclusion-exclusion, products and sums on counts") {
  auto f2 = Field::prime(2);
  auto x = scheme(f2, {"x", "y"});
  std::vector<SieveExpr> sieves{V(x, "x"), V(x, "x*y - 1"), D(x, "x + y"), V(x, "y^2 + y") | D(x, "x"),
                                D(x, "y") & V(x, "x^2 + x")};
  for (auto m : {pt(f2), jet(f2, 2)})
    for (const auto& a : sieves)
      for (const auto& b : sieves) {
        CHECK(count(a | b, m) + count(a & b, m) == count(a, m) + count(b, m));
        CHECK(count(product(a, b).sieve, m) == count(a, m) * count(b, m));
        CHECK(count(disjoint_union(a, b).sieve, m) == count(a, m) + count(b, m));
      }
}

TEST_CASE("pullbacks") {
  auto f3 = Field::prime(3);
  auto a1 = scheme(f3, {"x"});
  Morphism sq(a1, a1, {P(a1, "x^2")});
  auto pulled = pullback(sq, D(a1, "x"));
  CHECK(pulled.to_string() == "D(x^2)");
  for (auto m : {pt(f3), jet(f3, 2), jet(f3, 3)}) CHECK(listed(pulled, m) == listed(D(a1, "x"), m));
  auto id = Morphism::identity(a1);
  auto s = V(a1, "x^2 - 1") | D(a1, "x + 1");
  CHECK(pullback(id, s).to_string() == s.to_string());
  CHECK(pullback(id, SieveExpr::full(a1)).kind() == SieveKind::Full);

  // pullback commutes with the lattice and matches preimages
  auto x = scheme(f3, {"x", "y"});
  Morphism phi(x, a1, {P(x, "x*y + 1")});
  auto img = SieveExpr::image(Morphism(scheme(f3, {"u"}, {}, "Z"), a1, {parse_poly("u^2", PolyRing(f3, {"u"}))}));
  std::vector<SieveExpr> subs{V(a1, "x"), D(a1, "x - 1"), img};
  auto m = jet(f3, 2);
  for (const auto& a : subs)
    for (const auto& b : subs) {
      CHECK(listed(pullback(phi, a | b), m) == listed(pullback(phi, a) | pullback(phi, b), m));
      CHECK(listed(pullback(phi, a & b), m) == listed(pullback(phi, a) & pullback(phi, b), m));
      std::set<std::string> pre;
      for (const auto& p : points(*x, m))
        if (member(apply(phi, p), a & b)) pre.insert(to_string(p));
      CHECK(listed(pullback(phi, a & b), m) == pre);
    }
}

TEST_CASE("admissible opens") {
  auto f2 = Field::prime(2);
  auto x = scheme(f2, {"x", "y"});
  auto host = V(x, "x*y");
  CHECK(is_admissible_open(host & D(x, "x"), host));
  CHECK(is_admissible_open(D(x, "y") & host, host));
  CHECK_FALSE(is_admissible_open(host & V(x, "x"), host));
  CHECK(is_admissible_open(host & (D(x, "x") | D(x, "y")), host));
  CHECK(is_admissible_open(host, host));
  CHECK(is_admissible_open(D(x, "x"), SieveExpr::full(x)));
  CHECK_FALSE(is_admissible_open(D(x, "x"), host));
}

TEST_CASE("continuity probe") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto host = V(a1, "x^2 + x");
  std::vector<std::pair<FatPointPtr, SieveExpr>> battery{{pt(f2), host & D(a1, "x")}, {jet(f2, 2), host & D(a1, "x + 1")},
                                                         {jet(f2, 2), host}};
  CHECK(continuity_probe(Morphism::identity(a1), host, host, battery).pass);
  Morphism sq(a1, a1, {P(a1, "x^2")});
  auto full = SieveExpr::full(a1);
  std::vector<std::pair<FatPointPtr, SieveExpr>> opens{{pt(f2), D(a1, "x")}, {jet(f2, 2), D(a1, "x + 1")},
                                                       {jet(f2, 3), D(a1, "x") | D(a1, "x + 1")}};
  CHECK(continuity_probe(sq, full, full, opens).pass);
  // the source hits points outside an image-leaf target
  auto origin = SieveExpr::image(Morphism(scheme(f2, {}, {}, "pt"), a1, {Poly(PolyRing(f2, {}))}));
  auto bad = continuity_probe(Morphism::identity(a1), full, origin, {{pt(f2), origin & D(a1, "x")}});
  CHECK_FALSE(bad.pass);
  CHECK(bad.counterexample.find("(1)") != std::string::npos);
  auto not_open = continuity_probe(Morphism::identity(a1), full, full, {{pt(f2), V(a1, "x")}});
  CHECK_FALSE(not_open.pass);
}

TEST_CASE("fiber products") {
  auto f2 = Field::prime(2);
  auto s = scheme(f2, {"s"}, {}, "S");
  auto x = scheme(f2, {"x", "s"}, {}, "X");
  auto graph = RelativeSieve(V(x, "x - s"), Morphism(x, s, {P(x, "s")}));
  auto m = jet(f2, 2);
  auto fp = fiber_product(graph, graph);
  CHECK(count(fp.sieve, m) == points(*s, m).size());
  auto unit = RelativeSieve::unit(s);
  auto a = RelativeSieve(V(x, "x^2 + s") | D(x, "x"), Morphism(x, s, {P(x, "s")}));
  auto with_unit = fiber_product(a, unit);
  CHECK(fiber_counts(with_unit, m) == fiber_counts(a, m));
  CHECK(count(with_unit.sieve, m) == count(a.sieve, m));
  auto k = scheme(f2, {}, {}, "k");
  auto y = scheme(f2, {"y"}, {}, "Y");
  auto over_point = fiber_product(RelativeSieve(V(y, "y^2 + y"), Morphism(y, k, {})),
                                  RelativeSieve(SieveExpr::full(y), Morphism(y, k, {})));
  CHECK(count(over_point.sieve, m) == count(V(y, "y^2 + y"), m) * 4);
  auto fc = fiber_counts(fp, m);
  CHECK(fc == std::vector<std::uint64_t>(4, 1));
  CHECK_THROWS_AS(fiber_product(a, RelativeSieve::unit(y)), Error);
}

TEST_CASE("simplicial sieves") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto two = V(a1, "x^2 + x");
  auto k = pt(f2);
  auto c = SimplicialSieve::constant(two, 3);
  for (std::size_t n = 0; n <= 3; ++n) CHECK(level_count(c, k, n) == 2);
  auto fib = SimplicialSieve::fiber(two, 3);
  CHECK(level_count(fib, k, 1) == 4);
  CHECK(level_count(fib, k, 3) == 16);
  CHECK_FALSE(check_structure(fib, k).has_value());
  CHECK_FALSE(check_structure(c, jet(f2, 2)).has_value());
  CHECK_THROWS_AS(fib.level(4), Error);

  auto f3 = Field::prime(3);
  auto b1 = scheme(f3, {"x"});
  auto sym = SimplicialSieve::symmetric_power(SieveExpr::full(b1), 3);
  for (std::size_t n = 0; n <= 3; ++n) {
    // oracle: nondecreasing tuples over a 3-element set
    std::uint64_t expected = 0;
    std::vector<int> t(n + 1, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int lo) {
      if (i == t.size()) {
        ++expected;
        return;
      }
      for (int v = lo; v < 3; ++v) rec(i + 1, v);
    };
    rec(0, 0);
    CHECK(level_count(sym, pt(f3), n) == expected);
  }

  auto other = SimplicialSieve::fiber(V(a1, "x"), 3);
  auto u = fib | other;
  auto i = fib & other;
  for (auto m : {k, jet(f2, 2)})
    for (std::size_t n = 0; n <= 2; ++n) {
      CHECK(level_count(u, m, n) + level_count(i, m, n) == level_count(fib, m, n) + level_count(other, m, n));
      CHECK(level_count(product(fib, c), m, n) == level_count(fib, m, n) * level_count(c, m, n));
      CHECK(level_count(disjoint_union(fib, c), m, n) == level_count(fib, m, n) + level_count(c, m, n));
    }
  CHECK_FALSE(check_structure(product(fib, c), k).has_value());
  CHECK_FALSE(check_structure(disjoint_union(fib, other), k).has_value());
  CHECK_FALSE(check_structure(u, k).has_value());

  // a level family that is not closed under the faces
  auto broken = SimplicialSieve::general(fib.ambient, {V(a1, "x"), fib.levels[1], fib.levels[2], fib.levels[3]});
  CHECK(check_structure(broken, k).has_value());
}

TEST_CASE("limit sieves") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto full = SieveExpr::full(a1);
  std::vector<FatPointPtr> battery{pt(f2), jet(f2, 2)};
  auto arcs = LimitSieve::full_arcs(full, PointSystem::jets(f2)).materialize(4, battery);
  REQUIRE(arcs.size() == 4);
  CHECK(arcs[3].sieve.kind() == SieveKind::Full);
  CHECK(arcs[3].arc.scheme->ring().size() == 4);

  auto single = LimitSieve::full_arcs(V(a1, "x^2"), PointSystem::explicit_chain({pt(f2)})).materialize(8, battery);
  REQUIRE(single.size() == 1);
  CHECK(listed(single[0].sieve, jet(f2, 2)).size() == listed(V(a1, "x^2"), jet(f2, 2)).size());

  auto system = PointSystem::jets(f2);
  auto base_arc = weil_restrict(a1, system.materialize(1)[0]);
  auto origin = LimitSieve::cylinder(full, system, SieveExpr::closed(base_arc.scheme, {Poly::variable(base_arc.scheme->ring(), 0)}));
  auto members = origin.materialize(4, battery);
  for (std::size_t n = 0; n < members.size(); ++n) CHECK(count(members[n].sieve, pt(f2)) == (1u << n));

  auto bad = LimitSieve(full, system, [](std::size_t i, const ArcScheme& arc) {
    return i == 1 ? SieveExpr::closed(arc.scheme, {Poly::variable(arc.scheme->ring(), 0) - Poly::constant(arc.scheme->ring(), 1)})
                  : SieveExpr::closed(arc.scheme, {Poly::variable(arc.scheme->ring(), 0)});
  }, "bad");
  CHECK_THROWS_AS(bad.materialize(3, battery), Error);
  auto broken_chain = PointSystem::explicit_chain({jet(f2, 3), jet(f2, 2)});
  CHECK_THROWS_AS(LimitSieve::full_arcs(full, broken_chain).materialize(2, battery), Error);
}

TEST_CASE("arc sieves") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto m = jet(f2, 2);
  auto arc = weil_restrict(a1, m);
  auto s = D(a1, "x") | V(a1, "x^2");
  auto as = arc_sieve(s, arc);
  // a k-point of the arc space is an m-point of A^1
  CHECK(count(as, pt(f2)) == count(s, m));
  auto img = SieveExpr::image(Morphism(scheme(f2, {"u"}, {}, "Z"), a1, {parse_poly("u^2", PolyRing(f2, {"u"}))}));
  CHECK(count(arc_sieve(img, arc), pt(f2)) == count(img, m));
}
