#include <algorithm>
#include <random>

#include "doctest.h"
#include "motivic/algebra.hpp"
#include "motivic/error.hpp"

using namespace motivic;

namespace {

// Test-side oracle: remainder of univariate division by a monic divisor,
// on dense coefficient vectors (index = degree).
std::vector<Scalar> univariate_remainder(std::vector<Scalar> p, const std::vector<Scalar>& monic_divisor) {
  const std::size_t dd = monic_divisor.size() - 1;
  for (std::size_t deg = p.size(); deg-- > dd;) {
    Scalar c = p[deg];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dd; ++i) p[deg - dd + i] -= c * monic_divisor[i];
  }
  p.resize(std::min(p.size(), dd));
  return p;
}

Poly P(const char* text, const PolyRing& r) { return parse_poly(text, r); }

}  // namespace

TEST_CASE("normal form examples") {
  PolyRing r(Field::rationals(), {"x"});
  Ideal i(r, {P("x^2", r)});
  CHECK(normal_form(P("x^2 + x", r), i) == P("x", r));
  auto oracle = univariate_remainder({0, 1, 1}, {0, 0, 1});
  CHECK(oracle == std::vector<Scalar>{0, 1});
  CHECK(normal_form(Poly(r), i).is_zero());

  PolyRing xy(Field::rationals(), {"x", "y"});
  CHECK(normal_form(P("y", xy), Ideal(xy, {P("x", xy)})) == P("y", xy));

  PolyRing other(Field::rationals(), {"z"});
  CHECK_THROWS_AS(normal_form(P("z", other), i), Error);
}

TEST_CASE("normal form agrees with univariate division") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-5, 5);
  PolyRing r(Field::rationals(), {"x"});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Scalar> p(7), d(4);
    for (auto& c : p) c = coeff(rng);
    for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] = coeff(rng);
    d.back() = 1;
    Poly pp(r), dp(r);
    for (std::size_t k = 0; k < p.size(); ++k) pp.add_term({static_cast<std::uint16_t>(k)}, p[k]);
    for (std::size_t k = 0; k < d.size(); ++k) dp.add_term({static_cast<std::uint16_t>(k)}, d[k]);
    auto expected = univariate_remainder(p, d);
    Poly nf = normal_form(pp, Ideal(r, {dp}));
    for (std::size_t k = 0; k < 3; ++k) CHECK(nf.coefficient({static_cast<std::uint16_t>(k)}) == expected[k]);
  }
}

TEST_CASE("normal form is idempotent and basis is order independent") {
  std::mt19937 rng(11);
  for (auto field : {Field::rationals(), Field::prime(3)}) {
    PolyRing r(field, {"x", "y", "z"});
    std::uniform_int_distribution<int> c(-2, 2), e(0, 2);
    auto random_poly = [&] {
      Poly p(r);
      for (int t = 0; t < 3; ++t)
        p.add_term({static_cast<std::uint16_t>(e(rng)), static_cast<std::uint16_t>(e(rng)),
                    static_cast<std::uint16_t>(e(rng))},
                   c(rng));
      return p;
    };
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Poly> gens{random_poly(), random_poly(), random_poly()};
      Ideal i(r, gens);
      Poly p = random_poly() * random_poly();
      Poly nf = i.normal_form(p);
      CHECK(i.normal_form(nf) == nf);
      for (const auto& t : nf.terms())
        for (const auto& g : i.basis()) CHECK_FALSE(divides(g.leading_monomial(), t.first));
      std::reverse(gens.begin(), gens.end());
      Ideal j(r, gens);
      CHECK(i.basis() == j.basis());
      auto a = quotient_basis(i), b = quotient_basis(j);
      CHECK(a.has_value() == b.has_value());
      if (a) CHECK(a->size() == b->size());
    }
  }
}

TEST_CASE("quotient basis examples") {
  PolyRing t(Field::rationals(), {"t"});
  auto b = quotient_basis(Ideal(t, {P("t^2", t)}));
  REQUIRE(b);
  CHECK(b->size() == 2);
  CHECK((*b)[0] == Exponents{0});
  CHECK((*b)[1] == Exponents{1});
  CHECK_FALSE(quotient_basis(Ideal(t)));
  PolyRing y(Field::rationals(), {"y_1", "y_2"});
  auto r = quotient_basis(Ideal(y, {P("y_1", y), P("y_2", y)}));
  REQUIRE(r);
  CHECK(r->size() == 1);
}

TEST_CASE("krull dimension examples") {
  for (std::size_t d = 0; d <= 8; ++d) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) names.push_back("x" + std::to_string(i));
    PolyRing r(Field::rationals(), names);
    CHECK(krull_dimension(Ideal(r)).dimension == d);
  }
  PolyRing xy(Field::rationals(), {"x", "y"});
  auto k = krull_dimension(Ideal(xy, {P("x^2", xy), P("2*x*y", xy)}));
  CHECK(k.dimension == 1);
  CHECK_FALSE(k.empty);
  auto u = krull_dimension(Ideal(xy, {P("1", xy)}));
  CHECK(u.dimension == 0);
  CHECK(u.empty);
  // twisted cubic: dimension 1
  PolyRing xyz(Field::rationals(), {"x", "y", "z"});
  CHECK(krull_dimension(Ideal(xyz, {P("y - x^2", xyz), P("z - x^3", xyz)})).dimension == 1);
}

TEST_CASE("tensor products multiply dimensions") {
  PolyRing t(Field::prime(5), {"t"});
  QuotientAlgebra a(Ideal(t, {P("t^2", t)}));
  PolyRing s(Field::prime(5), {"s"});
  QuotientAlgebra b(Ideal(s, {P("s^2", s)}));
  CHECK(tensor_product(a, b).dimension() == 4);
  QuotientAlgebra c(Ideal(t, {P("t^3", t)}));
  auto ac = tensor_product(a, c);
  CHECK(ac.dimension() == 6);
  CHECK(ac.ring().names() == std::vector<std::string>{"t", "t'"});
  QuotientAlgebra k(Ideal(PolyRing(Field::prime(5), {})));
  CHECK(tensor_product(a, k).dimension() == 2);
  QuotientAlgebra q(Ideal(PolyRing(Field::rationals(), {})));
  CHECK_THROWS_AS(tensor_product(a, q), Error);
  for (unsigned i = 1; i <= 3; ++i)
    for (unsigned j = 1; j <= 3; ++j) {
      QuotientAlgebra x(Ideal(t, {Poly::variable(t, 0).pow(i)}));
      QuotientAlgebra y(Ideal(s, {Poly::variable(s, 0).pow(j), }));
      CHECK(tensor_product(x, y).dimension() == i * j);
    }
}

TEST_CASE("fast F_p arithmetic matches exact arithmetic") {
  std::mt19937 rng(3);
  PolyRing r(Field::prime(3), {"u", "v"});
  QuotientAlgebra alg(Ideal(r, {P("u^2 - v", r), P("v^2", r), P("u*v", r)}));
  FpAlgebra fp(alg);
  REQUIRE(fp.dimension() == alg.dimension());
  std::uniform_int_distribution<std::uint64_t> pick(0, fp.cardinality() - 1);
  std::vector<std::uint32_t> a(fp.dimension()), b(fp.dimension()), out(fp.dimension());
  for (int trial = 0; trial < 100; ++trial) {
    fp.decode(pick(rng), a);
    fp.decode(pick(rng), b);
    fp.multiply(a, b, out);
    CHECK(fp.to_element(out) == alg.multiply(fp.to_element(a), fp.to_element(b)));
  }
  Poly f = P("u^3 + 2*u*v + v + 1", r);
  CompiledPoly cf(f, 3);
  std::vector<std::uint32_t> vals(2 * fp.dimension());
  for (int trial = 0; trial < 50; ++trial) {
    fp.decode(pick(rng), std::span(vals).subspan(0, fp.dimension()));
    fp.decode(pick(rng), std::span(vals).subspan(fp.dimension(), fp.dimension()));
    std::vector<Element> imgs{fp.to_element(std::span(vals).subspan(0, fp.dimension())),
                              fp.to_element(std::span(vals).subspan(fp.dimension(), fp.dimension()))};
    cf.evaluate(fp, vals, out);
    CHECK(fp.to_element(out) == alg.evaluate(f, imgs));
  }
}

TEST_CASE("polynomial printing and parsing") {
  PolyRing r(Field::rationals(), {"x_0", "x_1"});
  Poly p = P("(x_0 + x_1)^2 - 3/2*x_1", r);
  CHECK(p.to_string() == "x_0^2 + 2*x_0*x_1 + x_1^2 - 3/2*x_1");
  CHECK(parse_poly(p.to_string(), r) == p);
  PolyRing f2(Field::prime(2), {"x"});
  CHECK(P("x - 1", f2).to_string() == "x + 1");
  CHECK_THROWS_AS(P("x +", r), Error);
}
