#include "doctest.h"
#include "motivic/fatpoint.hpp"

using namespace motivic;

namespace {

FatPoint fat(const Field& f, std::vector<std::string> vars, std::vector<const char*> gens) {
  PolyRing r(f, std::move(vars));
  std::vector<Poly> g;
  for (auto s : gens) g.push_back(parse_poly(s, r));
  return FatPoint::make(Ideal(r, g));
}

FatPointPtr ptr(FatPoint f) { return std::make_shared<const FatPoint>(std::move(f)); }

}  // namespace

TEST_CASE("make_fat_point validates finiteness and locality") {
  auto q = Field::rationals();
  CHECK(fat(q, {"t"}, {"t^3"}).length() == 3);
  try {
    fat(q, {"t"}, {"t^2 - 1"});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotLocal);
  }
  try {
    fat(q, {"t", "s"}, {"t^2"});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFinite);
  }
  CHECK(FatPoint::spec_k(q).length() == 1);
  CHECK(fat(q, {"t", "s"}, {"t^2", "s^2", "t*s"}).length() == 3);
}

TEST_CASE("simplicial levels") {
  auto f = Field::prime(2);
  auto m = ptr(FatPoint::jet(f, 2));
  SimplicialFatPoint triv(FunctorTag::Trivial, m, 5);
  CHECK(triv.level(5) == m);
  for (std::size_t n = 0; n <= 5; ++n) CHECK(triv.level(n).get() == m.get());
  SimplicialFatPoint fib(FunctorTag::Fiber, m, 3);
  CHECK(fib.level(0)->length() == 2);
  CHECK(fib.level(1)->length() == 4);
  CHECK_THROWS_AS(fib.level(4), Error);
  SimplicialFatPoint sym(FunctorTag::Symmetric, m, 2);
  CHECK_THROWS_AS(sym.level(0), Error);
}

TEST_CASE("fiber levels have length l^(n+1)") {
  auto f = Field::prime(3);
  for (auto base : {ptr(FatPoint::jet(f, 1)), ptr(FatPoint::jet(f, 2)), ptr(FatPoint::jet(f, 3)),
                    ptr(fat(f, {"a", "b"}, {"a^2", "b^2", "a*b"}))}) {
    std::size_t top = base->length() >= 3 ? 3 : 4;
    SimplicialFatPoint fib(FunctorTag::Fiber, base, top);
    std::size_t expected = base->length();
    for (std::size_t n = 0; n <= top; ++n) {
      CHECK(fib.level(n)->length() == expected);
      expected *= base->length();
    }
  }
}

TEST_CASE("cofaces and codegeneracies satisfy the cosimplicial identities") {
  auto f = Field::prime(2);
  SimplicialFatPoint fib(FunctorTag::Fiber, ptr(FatPoint::jet(f, 2)), 3);
  auto compose = [](const AlgebraMap& second, const AlgebraMap& first) {
    const auto& a = second.matrix();
    const auto& b = first.matrix();
    std::vector<std::vector<Scalar>> out(a.size(), std::vector<Scalar>(b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b[0].size(); ++j) {
        Scalar s = 0;
        for (std::size_t k = 0; k < b.size(); ++k) s += a[i][k] * b[k][j];
        out[i][j] = Field::prime(2).reduce(s);
      }
    return out;
  };
  // d^j d^i = d^i d^{j-1} for i < j
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        CHECK(compose(fib.coface(n, j), fib.coface(n - 1, i)) == compose(fib.coface(n, i), fib.coface(n - 1, j - 1)));
  // s^j d^j = id
  for (std::size_t n = 0; n <= 2; ++n)
    for (std::size_t j = 0; j <= n; ++j) {
      auto id = compose(fib.codegeneracy(n, j), fib.coface(n + 1, j));
      for (std::size_t r = 0; r < id.size(); ++r)
        for (std::size_t c = 0; c < id.size(); ++c) CHECK(id[r][c] == (r == c ? 1 : 0));
    }
}

TEST_CASE("chain checks") {
  auto q = Field::rationals();
  for (std::size_t h : {1u, 2u, 8u, 64u}) CHECK(chain_check(PointSystem::jets(q), h).ok);
  auto bad = PointSystem::explicit_chain({ptr(FatPoint::jet(q, 3)), ptr(FatPoint::jet(q, 2))});
  auto r = chain_check(bad, 2);
  CHECK_FALSE(r.ok);
  CHECK(r.index == 0);
  CHECK(r.generator == "t^2");
  CHECK(chain_check(PointSystem::explicit_chain({ptr(FatPoint::jet(q, 2))}), 1).ok);
  CHECK(chain_check(PointSystem::explicit_chain({ptr(FatPoint::spec_k(q)), ptr(FatPoint::jet(q, 2))}), 2).ok);
  CHECK_THROWS_AS(LimitPoint(bad, 2), Error);
  CHECK_NOTHROW(LimitPoint(PointSystem::jets(q), 8));
  CHECK(is_closed_subscheme(FatPoint::jet(q, 2), FatPoint::jet(q, 5)));
  CHECK_FALSE(is_closed_subscheme(FatPoint::jet(q, 5), FatPoint::jet(q, 2)));
}
