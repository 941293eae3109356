#include "motivic/arc.hpp"

#include <algorithm>
#include <set>

namespace motivic {

namespace {

// Element of O_m with polynomial coefficients in an arc ring.
using ArcElement = std::vector<Poly>;

ArcElement arc_zero(const PolyRing& ring, std::size_t dim) { return ArcElement(dim, Poly(ring)); }

ArcElement arc_multiply(const QuotientAlgebra& alg, const ArcElement& a, const ArcElement& b, const PolyRing& ring) {
  const std::size_t d = alg.dimension();
  ArcElement out = arc_zero(ring, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (b[j].is_zero()) continue;
      const Element& t = alg.product_of_basis(i, j);
      Poly ab = a[i] * b[j];
      for (std::size_t k = 0; k < d; ++k)
        if (t[k] != 0) out[k] += ab.scaled(t[k]);
    }
  }
  return out;
}

ArcElement arc_evaluate(const QuotientAlgebra& alg, const Poly& f, const std::vector<ArcElement>& images,
                        const PolyRing& ring) {
  const std::size_t d = alg.dimension();
  std::vector<std::vector<ArcElement>> powers(images.size());
  auto one = [&] {
    ArcElement e = arc_zero(ring, d);
    if (d) e[0] = Poly::constant(ring, 1);
    return e;
  };
  auto power = [&](std::size_t v, unsigned k) -> const ArcElement& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(one());
    while (cache.size() <= k) cache.push_back(arc_multiply(alg, cache.back(), images[v], ring));
    return cache[k];
  };
  ArcElement acc = arc_zero(ring, d);
  for (const auto& [e, c] : f.terms()) {
    ArcElement term = one();
    for (auto& t : term) t = t.scaled(c);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v]) term = arc_multiply(alg, term, power(v, e[v]), ring);
    for (std::size_t k = 0; k < d; ++k) acc[k] += term[k];
  }
  return acc;
}

std::vector<ArcElement> generic_arc(const PolyRing& arc_ring, std::size_t nvars, std::size_t d) {
  std::vector<ArcElement> images;
  for (std::size_t i = 0; i < nvars; ++i) {
    ArcElement e;
    for (std::size_t j = 0; j < d; ++j) e.push_back(Poly::variable(arc_ring, i * d + j));
    images.push_back(std::move(e));
  }
  return images;
}

}  // namespace

ArcScheme weil_restrict(const SchemePtr& x, const FatPointPtr& m, const Caps& caps) {
  if (!(x->field() == m->field())) fail(ErrorKind::FieldMismatch, "scheme and fat point over different fields");
  const QuotientAlgebra& alg = m->algebra();
  const std::size_t d = alg.dimension();
  const std::size_t n = x->ring().size();
  if (n * d > caps.max_arc_coordinates) fail(ErrorKind::CapExceeded, "too many arc coordinates");
  std::vector<std::string> names;
  for (const auto& v : x->ring().names())
    for (std::size_t j = 0; j < d; ++j) names.push_back(v + "_" + std::to_string(j));
  PolyRing ring(x->field(), names);
  auto images = generic_arc(ring, n, d);
  std::vector<Poly> equations;
  std::size_t emitted = 0;
  for (const auto& f : x->equations()) {
    ArcElement value = arc_evaluate(alg, f, images, ring);
    for (auto& component : value) {
      ++emitted;
      if (!component.is_zero()) equations.push_back(std::move(component));
    }
  }
  auto scheme = std::make_shared<const AffineScheme>("arc(" + x->name() + ")", Ideal(ring, std::move(equations)));
  return ArcScheme{scheme, x, m, emitted};
}

std::vector<Poly> weil_expand(const Poly& f, const ArcScheme& arc) {
  require_same_ring(f.ring(), arc.source->ring(), "weil expansion");
  const QuotientAlgebra& alg = arc.point->algebra();
  const PolyRing& ring = arc.scheme->ring();
  return arc_evaluate(alg, f, generic_arc(ring, arc.source->ring().size(), alg.dimension()), ring);
}

Morphism arc_of_morphism(const Morphism& phi, const ArcScheme& source_arc, const ArcScheme& target_arc) {
  if (source_arc.point != target_arc.point &&
      !(source_arc.point->algebra().presentation().ring() == target_arc.point->algebra().presentation().ring() &&
        source_arc.point->algebra().presentation().basis() == target_arc.point->algebra().presentation().basis()))
    fail(ErrorKind::Incompatible, "arc of a morphism needs one fat point");
  const QuotientAlgebra& alg = source_arc.point->algebra();
  const std::size_t d = alg.dimension();
  const PolyRing& ring = source_arc.scheme->ring();
  auto z = generic_arc(ring, phi.source()->ring().size(), d);
  std::vector<Poly> images;
  for (const auto& img : phi.images()) {
    ArcElement v = arc_evaluate(alg, img, z, ring);
    for (auto& c : v) images.push_back(std::move(c));
  }
  return Morphism(source_arc.scheme, target_arc.scheme, std::move(images));
}

Morphism induced_arc_map(const ArcScheme& from_arc, const ArcScheme& to_arc, const AlgebraMap& map) {
  if (!from_arc.source->same_as(*to_arc.source)) fail(ErrorKind::AmbientMismatch, "arc map between different bases");
  const std::size_t d_from = from_arc.point->length();
  const std::size_t d_to = to_arc.point->length();
  const std::size_t n = from_arc.source->ring().size();
  const PolyRing& ring = from_arc.scheme->ring();
  const auto& m = map.matrix();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d_to; ++k) {
      Poly img(ring);
      for (std::size_t j = 0; j < d_from; ++j)
        if (m[k][j] != 0) img += Poly::variable(ring, i * d_from + j).scaled(m[k][j]);
      images.push_back(std::move(img));
    }
  return Morphism(from_arc.scheme, to_arc.scheme, std::move(images));
}

Morphism truncation_map(const ArcScheme& big, const ArcScheme& small) {
  AlgebraMap map = AlgebraMap::by_name(big.point->algebra(), small.point->algebra());
  if (!map.is_surjective()) fail(ErrorKind::NotClosedImmersion, "truncation needs a surjection of algebras");
  return induced_arc_map(big, small, map);
}

std::size_t arc_dimension(const SchemePtr& x, const FatPointPtr& m, const Caps& caps) {
  return krull_dimension(weil_restrict(x, m, caps).scheme->presentation()).dimension;
}

AffineScheme with_source_names(const ArcScheme& arc) {
  if (arc.point->length() != 1) fail(ErrorKind::InvalidArgument, "renaming needs a length-one fat point");
  const PolyRing& src = arc.source->ring();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < src.size(); ++i) images.push_back(Poly::variable(src, i));
  std::vector<Poly> gens;
  for (const auto& g : arc.scheme->equations()) gens.push_back(g.substitute(images, src));
  return AffineScheme(arc.source->name(), Ideal(src, std::move(gens)));
}

AdjunctionVerdict adjunction_check(const SchemePtr& x, const FatPointPtr& m, const FatPointPtr& a, const Caps& caps) {
  if (!x->field().is_finite()) fail(ErrorKind::InfiniteField, "adjunction check enumerates over a finite field");
  QuotientAlgebra am_alg = tensor_product(a->algebra(), m->algebra());
  auto am = std::make_shared<const FatPoint>(FatPoint::make(am_alg.presentation(), Caps{64}));
  const auto& am_basis = am->algebra().basis();
  const std::size_t na = a->algebra().ring().size();
  const std::size_t la = a->length(), lm = m->length(), lam = am->length();

  // position in O_{a x m} of a_u (x) b_j
  std::vector<std::size_t> slot(la * lm);
  for (std::size_t idx = 0; idx < lam; ++idx) {
    Exponents ea(am_basis[idx].begin(), am_basis[idx].begin() + static_cast<std::ptrdiff_t>(na));
    Exponents em(am_basis[idx].begin() + static_cast<std::ptrdiff_t>(na), am_basis[idx].end());
    auto u = a->algebra().basis_index(ea);
    auto j = m->algebra().basis_index(em);
    if (u < 0 || j < 0) fail(ErrorKind::InvalidArgument, "tensor basis does not split");
    slot[static_cast<std::size_t>(u) * lm + static_cast<std::size_t>(j)] = idx;
  }

  ArcScheme arc = weil_restrict(x, m, caps);
  FpAlgebra fp_am(am->algebra());
  FpAlgebra fp_a(a->algebra());
  AdjunctionVerdict verdict;

  PointEnumerator right(fp_a, arc.scheme->ring(), arc.scheme->equations(), caps.max_candidates);
  verdict.arc_side = right.count();

  std::vector<CompiledPoly> arc_eqs;
  for (const auto& e : arc.scheme->equations()) arc_eqs.emplace_back(e, fp_a.p());
  std::set<FlatPoint> seen;
  bool all_valid = true;
  const std::size_t n = x->ring().size();
  PointEnumerator left(fp_am, x->ring(), x->equations(), caps.max_candidates);
  left.for_each([&](std::span<const std::uint32_t> flat) {
    ++verdict.product_side;
    // x_i = sum_{u,j} c a_u b_j  ->  arc coordinate (i, j) = sum_u c a_u
    FlatPoint image(n * lm * la);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < lm; ++j)
        for (std::size_t u = 0; u < la; ++u) image[(i * lm + j) * la + u] = flat[i * lam + slot[u * lm + j]];
    for (const auto& eq : arc_eqs)
      if (!eq.vanishes(fp_a, image)) {
        all_valid = false;
        break;
      }
    seen.insert(std::move(image));
    return true;
  });
  verdict.bijection = all_valid && seen.size() == verdict.product_side && verdict.product_side == verdict.arc_side;
  return verdict;
}

SimplicialArc simplicial_arc(const SimplicialScheme& base, const SimplicialFatPoint& sfp, const Caps& caps) {
  if (sfp.tag() == FunctorTag::Symmetric)
    fail(ErrorKind::Unsupported, "the symmetric functor has no ambient arc spaces");
  const std::size_t top = sfp.truncation_level();
  if (base.top_level() < top) fail(ErrorKind::LevelOutOfRange, "base simplicial scheme is truncated below the fat point");
  SimplicialArc out{sfp.tag(), {}, {}, {}, {}, {}};
  if (sfp.tag() == FunctorTag::Trivial) {
    for (std::size_t n = 0; n <= top; ++n) out.levels.push_back(weil_restrict(base.levels[n], sfp.level(n), caps));
    out.faces.resize(top + 1);
    out.degeneracies.resize(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
      if (n > 0)
        for (const auto& f : base.faces[n]) out.faces[n].push_back(arc_of_morphism(f, out.levels[n], out.levels[n - 1]));
      if (n < top)
        for (const auto& s : base.degeneracies[n])
          out.degeneracies[n].push_back(arc_of_morphism(s, out.levels[n], out.levels[n + 1]));
    }
    return out;
  }
  if (!base.is_constant()) fail(ErrorKind::Unsupported, "fiber-functor arcs need a constant base");
  for (std::size_t n = 0; n <= top; ++n) out.levels.push_back(weil_restrict(base.levels[0], sfp.level(n), caps));
  out.cofaces.resize(top + 1);
  out.codegeneracies.resize(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i)
        out.cofaces[n].push_back(induced_arc_map(out.levels[n - 1], out.levels[n], sfp.coface(n, i)));
    if (n < top)
      for (std::size_t i = 0; i <= n; ++i)
        out.codegeneracies[n].push_back(induced_arc_map(out.levels[n + 1], out.levels[n], sfp.codegeneracy(n, i)));
  }
  return out;
}

}  // namespace motivic
