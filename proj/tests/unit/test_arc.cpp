#include "doctest.h"
#include "motivic/arc.hpp"

using namespace motivic;

namespace {

SchemePtr scheme(const Field& f, std::vector<std::string> vars, std::vector<const char*> gens) {
  PolyRing r(f, std::move(vars));
  std::vector<Poly> g;
  for (auto s : gens) g.push_back(parse_poly(s, r));
  return std::make_shared<const AffineScheme>("X", Ideal(r, g));
}

FatPointPtr jet(const Field& f, unsigned n) { return std::make_shared<const FatPoint>(FatPoint::jet(f, n)); }
FatPointPtr pt(const Field& f) { return std::make_shared<const FatPoint>(FatPoint::spec_k(f)); }

// Oracle: count algebra maps by running through every coefficient tuple and
// testing the equations with exact arithmetic.
std::size_t brute_force_points(const AffineScheme& x, const FatPoint& m) {
  const auto& alg = m.algebra();
  const std::uint32_t p = x.field().characteristic();
  const std::size_t n = x.ring().size(), d = alg.dimension();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n * d; ++i) total *= p;
  std::size_t count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    std::vector<Element> images(n, Element(d));
    for (auto& e : images)
      for (auto& s : e) {
        s = static_cast<unsigned long>(c % p);
        c /= p;
      }
    bool ok = true;
    for (const auto& g : x.equations()) {
      auto v = alg.evaluate(g, images);
      for (const auto& s : v)
        if (s != 0) ok = false;
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("points over fat points") {
  auto f2 = Field::prime(2);
  auto m = jet(f2, 2);
  auto a1 = scheme(f2, {"x"}, {});
  CHECK(points(*a1, m).size() == 4);
  CHECK(brute_force_points(*a1, *m) == 4);
  auto dbl = scheme(f2, {"x"}, {"x^2"});
  auto pts = points(*dbl, m);
  CHECK(pts.size() == 2);
  CHECK(brute_force_points(*dbl, *m) == 2);
  CHECK(to_string(pts[0]) == "(0)");
  CHECK(to_string(pts[1]) == "(t)");
  auto spec = scheme(f2, {}, {});
  CHECK(points(*spec, m).size() == 1);
  auto q = Field::rationals();
  CHECK_THROWS_AS(points(*scheme(q, {"x"}, {}), jet(q, 2)), Error);
}

TEST_CASE("enumeration agrees with brute force") {
  auto f3 = Field::prime(3);
  auto m = jet(f3, 2);
  for (auto gens : std::vector<std::vector<const char*>>{{"x*y"}, {"x^2 - y"}, {"x^2", "y^2"}, {"x*y - 1"}}) {
    auto x = scheme(f3, {"x", "y"}, gens);
    CHECK(points(*x, m).size() == brute_force_points(*x, *m));
  }
}

TEST_CASE("weil restriction examples") {
  auto q = Field::rationals();
  auto a1 = scheme(q, {"x"}, {});
  auto arc = weil_restrict(a1, jet(q, 2));
  CHECK(arc.scheme->ring().names() == std::vector<std::string>{"x_0", "x_1"});
  CHECK(arc.scheme->equations().empty());

  auto dbl = scheme(q, {"x"}, {"x^2"});
  auto arc2 = weil_restrict(dbl, jet(q, 2));
  REQUIRE(arc2.scheme->equations().size() == 2);
  CHECK(arc2.scheme->equations()[0].to_string() == "x_0^2");
  CHECK(arc2.scheme->equations()[1].to_string() == "2*x_0*x_1");
  CHECK(arc2.emitted_equations == 2);

  auto x = scheme(q, {"x", "y"}, {"x*y - 1", "x^3 - y^2"});
  auto flat = weil_restrict(x, pt(q));
  CHECK(with_source_names(flat).same_as(*x));
  CHECK(with_source_names(flat).equations() == x->equations());
}

TEST_CASE("arc coordinate and equation counts") {
  auto q = Field::rationals();
  auto x = scheme(q, {"x", "y"}, {"x*y", "x^2 - y^3"});
  for (unsigned n = 1; n <= 4; ++n) {
    auto arc = weil_restrict(x, jet(q, n));
    CHECK(arc.scheme->ring().size() == 2 * n);
    CHECK(arc.emitted_equations == 2 * n);
  }
  Caps tiny;
  tiny.max_arc_coordinates = 3;
  CHECK_THROWS_AS(weil_restrict(x, jet(q, 2), tiny), Error);
}

TEST_CASE("adjunction bijection") {
  auto f2 = Field::prime(2);
  auto m = jet(f2, 2);
  auto v = adjunction_check(scheme(f2, {"x"}, {"x^2"}), m, m);
  CHECK(v.holds());
  CHECK(v.product_side == v.arc_side);
  auto dbl = scheme(f2, {"x"}, {"x^2"});
  auto u = adjunction_check(dbl, m, pt(f2));
  CHECK(u.holds());
  CHECK(u.arc_side == points(*dbl, m).size());
  auto f3 = Field::prime(3);
  auto w = adjunction_check(scheme(f3, {"x"}, {}), jet(f3, 2), pt(f3));
  CHECK(w.product_side == 9);
  CHECK(w.arc_side == 9);
  CHECK(w.holds());
}

TEST_CASE("truncation maps") {
  auto q = Field::rationals();
  auto a1 = scheme(q, {"x"}, {});
  auto big = weil_restrict(a1, jet(q, 3));
  auto small = weil_restrict(a1, jet(q, 2));
  auto t = truncation_map(big, small);
  REQUIRE(t.images().size() == 2);
  CHECK(t.images()[0].to_string() == "x_0");
  CHECK(t.images()[1].to_string() == "x_1");
  auto id = truncation_map(big, big);
  for (std::size_t i = 0; i < 3; ++i) CHECK(id.images()[i] == Poly::variable(big.scheme->ring(), i));
  auto base = weil_restrict(a1, pt(q));
  auto r = truncation_map(big, base);
  CHECK(r.images()[0].to_string() == "x_0");
  CHECK_THROWS_AS(truncation_map(small, big), Error);

  // functoriality on a chain with a non-affine-space base
  auto x = scheme(q, {"x", "y"}, {"x^2 - y^3"});
  auto a5 = weil_restrict(x, jet(q, 5)), a3 = weil_restrict(x, jet(q, 3)), a2 = weil_restrict(x, jet(q, 2));
  auto direct = truncation_map(a5, a2);
  auto composite = truncation_map(a3, a2).after(truncation_map(a5, a3));
  CHECK(direct.images() == composite.images());
}

TEST_CASE("arc dimension") {
  auto q = Field::rationals();
  for (unsigned d = 1; d <= 3; ++d) {
    std::vector<std::string> names;
    for (unsigned i = 0; i < d; ++i) names.push_back("x" + std::to_string(i));
    for (unsigned l = 1; l <= 4; ++l) CHECK(arc_dimension(scheme(q, names, {}), jet(q, l)) == d * l);
  }
  CHECK(arc_dimension(scheme(q, {}, {}), jet(q, 3)) == 0);
  CHECK(arc_dimension(scheme(q, {"x"}, {"x^2"}), jet(q, 2)) == 1);
}

TEST_CASE("simplicial arcs") {
  auto f2 = Field::prime(2);
  auto a1 = scheme(f2, {"x"}, {});
  auto m = jet(f2, 2);
  auto base = SimplicialScheme::constant(a1, 2);
  auto triv = simplicial_arc(base, SimplicialFatPoint(FunctorTag::Trivial, m, 2));
  REQUIRE(triv.levels.size() == 3);
  for (const auto& l : triv.levels) CHECK(l.scheme->same_as(*triv.levels[0].scheme));
  CHECK(triv.faces[1].size() == 2);
  auto fib = simplicial_arc(base, SimplicialFatPoint(FunctorTag::Fiber, m, 1));
  CHECK(fib.levels[1].scheme->ring().size() == 4);
  CHECK(fib.levels[1].scheme->equations().empty());
  CHECK(fib.cofaces[1].size() == 2);
  auto zero = simplicial_arc(SimplicialScheme::constant(a1, 0), SimplicialFatPoint(FunctorTag::Trivial, m, 0));
  CHECK(zero.levels.size() == 1);
  CHECK(zero.levels[0].scheme->same_as(*weil_restrict(a1, m).scheme));
  CHECK_THROWS_AS(simplicial_arc(base, SimplicialFatPoint(FunctorTag::Symmetric, m, 1)), Error);
}
