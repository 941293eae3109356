#include <random>

#include "doctest.h"
#include "motivic/kring.hpp"

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

Scalar count_q(const SieveExpr& s, const FatPointPtr& m) { return Scalar(static_cast<unsigned long>(count(s, m))); }

// Random sieve over a fixed pool of leaves.
SieveExpr random_sieve(std::mt19937& rng, const std::vector<SieveExpr>& leaves, int depth) {
  SieveExpr s = leaves[rng() % leaves.size()];
  for (int k = 0; k < depth; ++k) {
    const auto& l = leaves[rng() % leaves.size()];
    s = (rng() % 2) ? (s | l) : (s & l);
  }
  return s;
}

}  // namespace

TEST_CASE("scissor relation on small classes") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto two_points = KClass::of(V(a1, "x") | V(a1, "x - 1"));
  CHECK(two_points == KClass::integer(2));
  CHECK(KClass::of(a1) == KClass::lefschetz());
  auto z1 = scheme(f2, {"z"}, {}, "Z");
  CHECK(KClass::of(D(a1, "x")) == KClass::of(D(z1, "z")));
  CHECK(counting_hom(KClass::of(D(a1, "x")), jet(f2, 2)) == 2);
  CHECK(KClass::of(SieveExpr::empty(a1)).is_zero());
  CHECK(KClass::of(V(a1, "x") & V(a1, "x - 1")).is_zero());
  auto a2 = scheme(f2, {"x", "y"});
  CHECK(KClass::of(a2) == KClass::lefschetz(2));
  CHECK(KClass::of(a1) * KClass::of(a1) == KClass::lefschetz(2));
  CHECK(KClass::of(V(a2, "y - x^2")) == KClass::lefschetz());
  CHECK(KClass::lefschetz() * KClass::lefschetz(-1) == KClass::one());
  CHECK(KClass::of(V(a2, "x") | V(a2, "y")) == KClass::lefschetz().scaled(2) - KClass::one());
  // same curve in different coordinates
  CHECK(KClass::of(V(a2, "x^2 + x*y + 1")) == KClass::of(V(a2, "y^2 + x*y + 1")));
  CHECK(KClass::of(a1).to_string() == "L");
  CHECK(KClass().to_string() == "0");
}

TEST_CASE("counting homomorphism agrees with enumeration") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  CHECK(counting_hom(KClass::of(a1), jet(f2, 2)) == 4);
  CHECK(counting_hom(KClass::lefschetz(-1), jet(f2, 2)) == Scalar(1, 4));
  for (const Field& f : {Field::prime(2), Field::prime(3)}) {
    auto x = scheme(f, {"x", "y"}, {}, "X");
    auto phi = Morphism(scheme(f, {"u"}, {}, "Z"), x,
                        {parse_poly("u^2", PolyRing(f, {"u"})), parse_poly("u", PolyRing(f, {"u"}))});
    std::vector<SieveExpr> leaves{V(x, "x"), V(x, "x*y - 1"), D(x, "y"), V(x, "x^2 + y^2"), D(x, "x - y + 1"),
                                  SieveExpr::image(phi)};
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
      auto s = random_sieve(rng, leaves, 3);
      auto c = KClass::of(s);
      for (auto m : {pt(f), jet(f, 2)}) CHECK_MESSAGE(counting_hom(c, m) == count_q(s, m), s.to_string());
    }
  }
}

TEST_CASE("ring laws on random classes") {
  auto f3 = Field::prime(3);
  auto x = scheme(f3, {"x", "y"});
  std::vector<SieveExpr> leaves{V(x, "x"), V(x, "y^2 - x"), D(x, "x + 1"), D(x, "y"), V(x, "x*y")};
  std::mt19937 rng(5);
  std::vector<KClass> pool;
  for (int i = 0; i < 12; ++i) {
    auto c = KClass::of(random_sieve(rng, leaves, 2));
    c = c * KClass::lefschetz(static_cast<long>(rng() % 3) - 1) + KClass::integer(static_cast<long>(rng() % 5) - 2);
    pool.push_back(c);
  }
  auto m = jet(f3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    const auto& c = pool[rng() % pool.size()];
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == KClass());
    CHECK(a * KClass::one() == a);
    CHECK(normalize(normalize(a)) == normalize(a));
    CHECK(counting_hom(a * b, m) == counting_hom(a, m) * counting_hom(b, m));
    CHECK(counting_hom(a + b, m) == counting_hom(a, m) + counting_hom(b, m));
  }
}

TEST_CASE("relative classes") {
  auto f2 = Field::prime(2);
  auto s = scheme(f2, {"s"}, {}, "S");
  auto x = scheme(f2, {"x", "s"}, {}, "X");
  Morphism to_s(x, s, {P(x, "s")});
  auto rel = RelativeSieve(V(x, "x^2 + s") | D(x, "x"), to_s);
  auto c = KClass::of(rel);
  auto m = jet(f2, 2);
  auto fc = fiber_counts(rel, m);
  auto cv = counting_vector(c, m);
  REQUIRE(cv.size() == fc.size());
  for (std::size_t i = 0; i < fc.size(); ++i) CHECK(cv[i] == Scalar(static_cast<unsigned long>(fc[i])));
  CHECK(KClass::of(RelativeSieve::unit(s)) == KClass::one(s));
  // product is the fiber product
  auto sq = c * c;
  auto fp = fiber_counts(fiber_product(rel, rel), m);
  auto sv = counting_vector(sq, m);
  for (std::size_t i = 0; i < fp.size(); ++i) CHECK(sv[i] == Scalar(static_cast<unsigned long>(fp[i])));
  auto other = scheme(f2, {"t"}, {}, "T");
  CHECK_THROWS_AS(c + KClass::one(other), Error);
}

TEST_CASE("pushforward and pullback") {
  auto f2 = Field::prime(2);
  auto s = scheme(f2, {"s"}, {}, "S");
  auto k = scheme(f2, {}, {}, "k");
  Morphism to_point(s, k, {});
  auto x = scheme(f2, {"x", "s"}, {}, "X");
  auto rel = RelativeSieve(V(x, "x*s - 1") | V(x, "x"), Morphism(x, s, {P(x, "s")}));
  auto c = KClass::of(rel);
  auto pushed = pushforward(to_point, c);
  for (auto m : {pt(f2), jet(f2, 2)}) CHECK(counting_hom(pushed, m) == counting_hom(c, m));
  // pullback along S -> k multiplies by [S]
  auto y = scheme(f2, {"y"}, {}, "Y");
  auto over_k = KClass::of(RelativeSieve(V(y, "y^2 + y"), Morphism(y, k, {})));
  auto pulled = pullback(to_point, over_k);
  for (auto m : {pt(f2), jet(f2, 2)}) {
    auto v = counting_vector(pulled, m);
    for (const auto& e : v) CHECK(e == counting_hom(over_k, m));
  }
  CHECK(pullback(to_point, over_k * over_k) == pullback(to_point, over_k) * pullback(to_point, over_k));
}

TEST_CASE("simplicial classes") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto l = SimplicialClass::lefschetz(4);
  for (std::size_t n = 0; n <= 4; ++n) CHECK(l.h(n) == KClass::lefschetz());
  CHECK_THROWS_AS(l.h(5), Error);
  auto c = KClass::of(V(a1, "x^2 + x") | D(a1, "x"));
  auto g = SimplicialClass::g(FunctorTag::Trivial, c, 3);
  for (std::size_t n = 0; n <= 3; ++n) CHECK(g.h(n) == c);
  CHECK(SimplicialClass::of(SimplicialSieve::constant(D(a1, "x"), 3)) ==
        SimplicialClass::g(FunctorTag::Trivial, KClass::of(D(a1, "x")), 3));
  auto fib = SimplicialClass::of(SimplicialSieve::fiber(SieveExpr::full(a1), 3));
  CHECK(fib.h(2) == KClass::lefschetz(3));
  CHECK(SimplicialClass::g(FunctorTag::Fiber, KClass::lefschetz(), 3) == fib);
  auto sym = SimplicialClass::of(SimplicialSieve::symmetric_power(SieveExpr::full(a1), 3));
  auto f3 = Field::prime(3);
  auto b1 = scheme(f3, {"x"});
  auto sym3 = SimplicialSieve::symmetric_power(SieveExpr::full(b1), 3);
  auto sym3c = SimplicialClass::of(sym3);
  for (std::size_t n = 0; n <= 3; ++n)
    CHECK(counting_hom(sym3c.h(n), pt(f3)) == Scalar(static_cast<unsigned long>(level_count(sym3, pt(f3), n))));
  CHECK(sym.h(0) == KClass::lefschetz());
  auto gens = std::vector<SimplicialClass>{SimplicialClass::lefschetz(3), SimplicialClass::lefschetz(3, 2), g};
  CHECK(h_injective_on(gens, 2));
  CHECK_THROWS_AS(h_injective_on({fib}, 1), Error);
  auto prod = g * SimplicialClass::lefschetz(3);
  CHECK(prod.h(1) == c * KClass::lefschetz());
}

TEST_CASE("hom-set adjunctions") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"});
  auto y = V(a1, "x^2 + x");
  auto x = SimplicialSieve::constant(D(a1, "x") | V(a1, "x"), 2);
  for (std::size_t n = 0; n <= 2; ++n) {
    auto v = tau_adjunction_check(y, x, n, pt(f2));
    CHECK_MESSAGE(v.holds(), v.detail);
    CHECK(v.left == 4);
  }
  auto fib = SimplicialSieve::fiber(SieveExpr::full(a1), 2);
  auto v0 = tau_adjunction_check(y, fib, 0, pt(f2));
  CHECK(v0.holds());
  auto v1 = tau_adjunction_check(y, fib, 1, pt(f2));
  CHECK(v1.left == 4);
  CHECK(v1.right == 16);
  CHECK_FALSE(v1.holds());

  auto s = scheme(f2, {"s"}, {}, "S");
  auto t = scheme(f2, {"t"}, {}, "T");
  Morphism f(s, t, {P(s, "s^2")});
  auto xs = scheme(f2, {"a", "s"}, {}, "X");
  auto yt = scheme(f2, {"b", "t"}, {}, "Y");
  auto rx = RelativeSieve(V(xs, "a*s"), Morphism(xs, s, {P(xs, "s")}));
  auto ry = RelativeSieve(V(yt, "b^2 + b*t"), Morphism(yt, t, {P(yt, "t")}));
  auto v = pushpull_adjunction_check(f, rx, ry, pt(f2));
  CHECK_MESSAGE(v.holds(), v.detail);
  CHECK(v.left > 0);
}

TEST_CASE("Cech nerve rings") {
  auto f2 = Field::prime(2);
  auto s = scheme(f2, {"s"}, {}, "S");
  CechKRing ring(s, 2);
  CHECK(ring.base(2)->ring().size() == 3);
  auto over2 = KClass::one(ring.base(2));
  CHECK_FALSE(ring.check_identities(2, over2).has_value());
  auto pulled = ring.pull(1, 0, KClass::one(ring.base(0)));
  CHECK(pulled == KClass::one(ring.base(1)));
  auto pushed = ring.push(1, 1, KClass::one(ring.base(1)));
  for (auto m : {pt(f2), jet(f2, 2)}) {
    auto v = counting_vector(pushed, m);
    for (const auto& e : v) CHECK(e == counting_hom(KClass::of(s), m));
  }
}
