#include <random>

#include "doctest.h"
#include "motivic/topo.hpp"

using namespace motivic;

namespace {

FatPointPtr pt(const Field& f) { return std::make_shared<const FatPoint>(FatPoint::spec_k(f)); }

long alternating_ranks(const RealizationInvariants& inv) {
  long s = 0;
  for (std::size_t n = 0; n < inv.homology.size(); ++n) s += (n % 2 ? -1L : 1L) * static_cast<long>(inv.homology[n].rank);
  return s;
}

// Oracle: the k-th determinantal divisor is the gcd of all k x k minors;
// invariant factors are quotients of consecutive divisors.
Integer det(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Integer>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(row);
    }
    total += (c % 2 ? -1 : 1) * m[0][c] * det(sub);
  }
  return total;
}

std::vector<Integer> invariant_factors_by_minors(const std::vector<std::vector<Integer>>& m) {
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<Integer> divisors{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    Integer g = 0;
    std::vector<std::size_t> rs(k), cs(k);
    std::function<void(std::size_t, std::size_t)> pick_rows, pick_cols;
    pick_cols = [&](std::size_t i, std::size_t start) {
      if (i == k) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub[a][b] = m[rs[a]][cs[b]];
        Integer d = abs(det(sub));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        return;
      }
      for (std::size_t c = start; c < cols; ++c) {
        cs[i] = c;
        pick_cols(i + 1, c + 1);
      }
    };
    pick_rows = [&](std::size_t i, std::size_t start) {
      if (i == k) {
        pick_cols(0, 0);
        return;
      }
      for (std::size_t r = start; r < rows; ++r) {
        rs[i] = r;
        pick_rows(i + 1, r + 1);
      }
    };
    pick_rows(0, 0);
    if (g == 0) break;
    divisors.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k < divisors.size(); ++k) out.push_back(divisors[k] / divisors[k - 1]);
  return out;
}

}  // namespace

TEST_CASE("Smith normal form against determinantal divisors") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(cols));
    for (auto& row : m)
      for (auto& e : row) e = static_cast<long>(rng() % 9) - 4;
    auto snf = smith_normal_form(m);
    CHECK(snf.factors == invariant_factors_by_minors(m));
  }
  auto diag = smith_normal_form({{2, 0}, {0, 3}});
  CHECK(diag.factors == std::vector<Integer>{1, 6});
}

TEST_CASE("simplices and boundaries") {
  auto d2 = FiniteSimplicialSet::standard_simplex(2, 3);
  auto inv = invariants(d2);
  CHECK(inv.components == 1);
  CHECK(inv.euler == 1);
  CHECK(inv.homology[0].rank == 1);
  CHECK(inv.homology[1].rank == 0);
  CHECK(inv.homology[2].rank == 0);
  CHECK(d2.nondegenerate(2).size() == 1);
  CHECK(d2.nondegenerate(3).empty());

  auto b2 = FiniteSimplicialSet::boundary_simplex(2, 3);
  auto binv = invariants(b2);
  CHECK(binv.components == 1);
  CHECK(binv.euler == 0);
  CHECK(binv.homology[1].rank == 1);
  CHECK(binv.homology[1].torsion.empty());
  CHECK(binv.homology[1].to_string() == "Z");

  auto b3 = invariants(FiniteSimplicialSet::boundary_simplex(3, 4));
  CHECK(b3.euler == 2);
  CHECK(b3.homology[2].rank == 1);
  CHECK(b3.homology[1].rank == 0);

  auto two = FiniteSimplicialSet::discrete(2, 2);
  CHECK(invariants(two).components == 2);
  CHECK(invariants(two).euler == 2);
  auto point = FiniteSimplicialSet::standard_simplex(0, 3);
  CHECK(homotopy_class_key(point) == homotopy_class_key(d2));
  CHECK(homotopy_class_key(point) != homotopy_class_key(b2));
  CHECK(homotopy_class_key(point) != homotopy_class_key(two));
  auto u = FiniteSimplicialSet::disjoint_union(b2, point);
  CHECK(invariants(u).components == 2);
  CHECK(invariants(u).euler == 1);
  for (const auto& a : {d2, b2, two, u}) CHECK(alternating_ranks(invariants(a)) == invariants(a).euler);

  CHECK_THROWS_AS(FiniteSimplicialSet({2, 1}, {{}, {{0}, {1}}}, {{{0, 0}}}), Error);
  Caps tiny;
  tiny.max_cells = 3;
  CHECK_THROWS_AS(invariants(d2, tiny), Error);
}

TEST_CASE("realizations of sieves") {
  auto f2 = Field::prime(2);
  auto a1 = std::make_shared<const AffineScheme>(AffineScheme::affine_space(f2, {"x"}));
  auto two = SieveExpr::closed(a1, {parse_poly("x^2 + x", a1->ring())});
  auto c = evaluate_to_sset(SimplicialSieve::constant(two, 2), pt(f2));
  CHECK(c.size(2) == 2);
  CHECK(invariants(c).euler == 2);
  auto k = std::make_shared<const AffineScheme>(AffineScheme::spec_k(f2));
  auto single = evaluate_to_sset(SimplicialSieve::constant(SieveExpr::full(k), 3), pt(f2));
  CHECK(homotopy_class_key(single) == homotopy_class_key(FiniteSimplicialSet::standard_simplex(0, 3)));
  auto fib = evaluate_to_sset(SimplicialSieve::fiber(two, 2), pt(f2));
  CHECK(fib.size(1) == 4);
  CHECK(invariants(fib).components == 1);

  // the interval as the nerve of 0 <= 1
  auto a2 = std::make_shared<const AffineScheme>(AffineScheme::affine_space(f2, {"x", "y"}));
  std::vector<std::vector<long>> pts{{0, 0}, {1, 0}, {0, 1}};
  auto interval = nerve_sieve(a2, pts, {{0, 0}, {1, 1}, {0, 1}}, 3);
  auto iset = evaluate_to_sset(interval, pt(f2));
  CHECK(iset.nondegenerate(1).size() == 1);
  CHECK(homotopy_class_key(iset) == homotopy_class_key(FiniteSimplicialSet::standard_simplex(1, 3)));
  // 0 <= 1, 0 <= 2: a path of two edges
  auto vee = evaluate_to_sset(nerve_sieve(a2, pts, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}}, 3), pt(f2));
  CHECK(invariants(vee).euler == 1);
  CHECK(invariants(vee).components == 1);
}

TEST_CASE("preservation and Euler characteristic") {
  auto f2 = Field::prime(2);
  auto a2 = std::make_shared<const AffineScheme>(AffineScheme::affine_space(f2, {"x", "y"}));
  std::vector<std::vector<long>> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  using Rel = std::vector<std::pair<std::size_t, std::size_t>>;
  Rel diag{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  auto with = [&](Rel extra, std::vector<std::size_t> drop = {}) {
    Rel r;
    for (auto p : diag)
      if (std::find(drop.begin(), drop.end(), p.first) == drop.end()) r.push_back(p);
    r.insert(r.end(), extra.begin(), extra.end());
    return r;
  };
  std::vector<Rel> rels{with({{0, 1}}), with({{0, 1}, {0, 2}}), with({}, {3}), with({{2, 3}}), with({{1, 3}, {2, 3}})};
  auto m = pt(f2);
  std::vector<SimplicialSieve> sieves;
  for (const auto& r : rels) sieves.push_back(nerve_sieve(a2, pts, r, 2));
  auto chi = [&](const SimplicialSieve& s) { return invariants(evaluate_to_sset(s, m)).euler; };
  for (const auto& a : sieves)
    for (const auto& b : sieves) {
      auto v = preservation_check(a, b, m);
      CHECK_MESSAGE(v.pass, v.detail);
      CHECK(chi(a | b) + chi(a & b) == chi(a) + chi(b));
      CHECK(chi(product(a, b)) == chi(a) * chi(b));
    }
  auto same = preservation_check(sieves[0], sieves[0], m);
  CHECK(same.pass);
}
