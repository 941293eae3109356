#include "motivic/groebner.hpp"

#include <algorithm>
#include <set>

#include "motivic/error.hpp"

namespace motivic {

Poly reduce(const Poly& p, const std::vector<Poly>& divisors) {
  const Field& f = p.field();
  Poly rest = p;
  Poly remainder(p.ring());
  while (!rest.is_zero()) {
    const Exponents lm = rest.leading_monomial();
    const Scalar lc = rest.leading_coefficient();
    bool reduced = false;
    for (const auto& d : divisors) {
      const Exponents& dm = d.leading_monomial();
      if (!divides(dm, lm)) continue;
      Exponents q(lm.size());
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<std::uint16_t>(lm[i] - dm[i]);
      rest -= d.times_monomial(q, f.div(lc, d.leading_coefficient()));
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.add_term(lm, lc);
      rest -= Poly::monomial(p.ring(), lm, lc);
    }
  }
  return remainder;
}

namespace {

Poly s_polynomial(const Poly& a, const Poly& b) {
  const Field& f = a.field();
  Exponents l = lcm(a.leading_monomial(), b.leading_monomial());
  Exponents qa(l.size()), qb(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    qa[i] = static_cast<std::uint16_t>(l[i] - a.leading_monomial()[i]);
    qb[i] = static_cast<std::uint16_t>(l[i] - b.leading_monomial()[i]);
  }
  return a.times_monomial(qa, f.inv(a.leading_coefficient())) -
         b.times_monomial(qb, f.inv(b.leading_coefficient()));
}

bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

struct Pair {
  std::size_t i, j;
  Exponents lcm;
};

}  // namespace

std::vector<Poly> reduced_groebner_basis(const PolyRing& ring, std::vector<Poly> generators) {
  std::vector<Poly> g;
  for (auto& p : generators) {
    require_same_ring(p.ring(), ring, "groebner basis");
    if (!p.is_zero()) g.push_back(p.monic());
  }
  for (const auto& p : g)
    if (p.is_constant()) return {Poly::constant(ring, 1)};

  std::vector<Pair> pairs;
  std::vector<bool> active;
  auto add_poly = [&](Poly p) {
    std::size_t k = g.size();
    g.push_back(std::move(p));
    active.push_back(true);
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      pairs.push_back({i, k, lcm(g[i].leading_monomial(), g[k].leading_monomial())});
    }
  };
  {
    std::vector<Poly> input = std::move(g);
    g.clear();
    for (auto& p : input) add_poly(std::move(p));
  }

  DegRevLexGreater greater;
  while (!pairs.empty()) {
    // normal strategy: smallest lcm first
    auto best = std::min_element(pairs.begin(), pairs.end(),
                                 [&](const Pair& a, const Pair& b) { return greater(b.lcm, a.lcm); });
    Pair pr = *best;
    pairs.erase(best);
    const Poly& a = g[pr.i];
    const Poly& b = g[pr.j];
    if (coprime(a.leading_monomial(), b.leading_monomial())) continue;
    // chain criterion: some k with lm_k | lcm and both (i,k), (j,k) already gone
    bool skip = false;
    for (std::size_t k = 0; k < g.size() && !skip; ++k) {
      if (k == pr.i || k == pr.j || !divides(g[k].leading_monomial(), pr.lcm)) continue;
      auto pending = [&](std::size_t x, std::size_t y) {
        if (x > y) std::swap(x, y);
        return std::any_of(pairs.begin(), pairs.end(), [&](const Pair& q) { return q.i == x && q.j == y; });
      };
      if (!pending(pr.i, k) && !pending(pr.j, k)) skip = true;
    }
    if (skip) continue;
    Poly s = reduce(s_polynomial(a, b), g);
    if (s.is_zero()) continue;
    if (s.is_constant()) return {Poly::constant(ring, 1)};
    add_poly(s.monic());
  }

  // minimalize
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& li = g[i].leading_monomial();
      const auto& lj = g[j].leading_monomial();
      if (divides(lj, li) && (lj != li || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  // inter-reduce
  std::vector<Poly> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    reduced.push_back(reduce(minimal[i], others).monic());
  }
  std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
    return greater(a.leading_monomial(), b.leading_monomial());
  });
  return reduced;
}

Ideal::Ideal(PolyRing ring, std::vector<Poly> generators)
    : ring_(std::move(ring)), generators_(std::move(generators)) {
  for (const auto& p : generators_) require_same_ring(p.ring(), ring_, "ideal");
  basis_ = reduced_groebner_basis(ring_, generators_);
}

bool Ideal::is_unit() const { return basis_.size() == 1 && basis_.front().is_constant(); }

bool Ideal::contains(const Poly& p) const { return normal_form(p).is_zero(); }

bool Ideal::contains(const Ideal& other) const {
  require_same_ring(ring_, other.ring_, "ideal containment");
  for (const auto& p : other.basis_)
    if (!contains(p)) return false;
  return true;
}

Poly Ideal::normal_form(const Poly& p) const {
  require_same_ring(p.ring(), ring_, "normal form");
  if (basis_.empty()) return p;
  return reduce(p, basis_);
}

Poly normal_form(const Poly& p, const Ideal& ideal) { return ideal.normal_form(p); }

std::optional<std::vector<Exponents>> quotient_basis(const Ideal& ideal) {
  const std::size_t n = ideal.ring().size();
  if (ideal.is_unit()) return std::vector<Exponents>{};
  // finite iff every variable has a pure power among the leading monomials
  std::vector<unsigned> bound(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& g : ideal.basis()) {
      const auto& lm = g.leading_monomial();
      bool pure = lm[v] > 0;
      for (std::size_t w = 0; w < n && pure; ++w)
        if (w != v && lm[w]) pure = false;
      if (pure && (bound[v] == 0 || lm[v] < bound[v])) bound[v] = lm[v];
    }
    if (bound[v] == 0) return std::nullopt;
  }
  std::vector<Exponents> out;
  Exponents e(n, 0);
  auto standard = [&](const Exponents& m) {
    for (const auto& g : ideal.basis())
      if (divides(g.leading_monomial(), m)) return false;
    return true;
  };
  // odometer over the box below the pure-power bounds
  for (;;) {
    if (standard(e)) out.push_back(e);
    std::size_t i = 0;
    while (i < n) {
      if (e[i] + 1u < bound[i]) {
        ++e[i];
        break;
      }
      e[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  DegRevLexGreater greater;
  std::sort(out.begin(), out.end(), [&](const Exponents& a, const Exponents& b) { return greater(b, a); });
  return out;
}

namespace {

// Smallest set of variables meeting every support; branch and bound.
void min_hitting_set(const std::vector<std::vector<std::size_t>>& supports, std::vector<bool>& chosen,
                     std::size_t size, std::size_t& best) {
  if (size >= best) return;
  const std::vector<std::size_t>* open = nullptr;
  for (const auto& s : supports) {
    bool hit = false;
    for (auto v : s)
      if (chosen[v]) {
        hit = true;
        break;
      }
    if (!hit && (!open || s.size() < open->size())) open = &s;
  }
  if (!open) {
    best = size;
    return;
  }
  for (auto v : *open) {
    chosen[v] = true;
    min_hitting_set(supports, chosen, size + 1, best);
    chosen[v] = false;
  }
}

}  // namespace

KrullDimension krull_dimension(const Ideal& ideal) {
  const std::size_t n = ideal.ring().size();
  if (ideal.is_unit()) return {0, true};
  std::vector<std::vector<std::size_t>> supports;
  for (const auto& g : ideal.basis()) {
    std::vector<std::size_t> s;
    const auto& lm = g.leading_monomial();
    for (std::size_t v = 0; v < n; ++v)
      if (lm[v]) s.push_back(v);
    supports.push_back(std::move(s));
  }
  std::vector<bool> chosen(n, false);
  std::size_t best = n;
  min_hitting_set(supports, chosen, 0, best);
  return {n - best, false};
}

Ideal embed_ideal(const Ideal& ideal, const PolyRing& target) {
  std::vector<Poly> gens;
  for (const auto& g : ideal.generators()) gens.push_back(g.rename_into(target));
  for (std::size_t v = 0; v < target.size(); ++v)
    if (!ideal.ring().index_of(target.names()[v])) gens.push_back(Poly::variable(target, v));
  return Ideal(target, std::move(gens));
}

}  // namespace motivic
