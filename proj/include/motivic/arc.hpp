#pragma once

#include <optional>

#include "motivic/scheme.hpp"

namespace motivic {

/// The arc scheme of X along a fat point m, representing A -> Hom(A x_k m, X).
/// Coordinate x_j is the coefficient of the j-th standard monomial of O_m
/// in the expansion of x.
struct ArcScheme {
  SchemePtr scheme;
  SchemePtr source;
  FatPointPtr point;
  std::size_t emitted_equations = 0;  // generators x length, before pruning zeros

  const std::vector<Exponents>& basis_used() const { return point->algebra().basis(); }
};

/// Weil restriction: substitutes x = sum_j x_j b_j, reduces in O_m and keeps
/// every nonzero coefficient equation. Throws CapExceeded.
ArcScheme weil_restrict(const SchemePtr& x, const FatPointPtr& m, const Caps& caps = {});

/// Coefficients of f(sum_j x_j b_j) along the basis of O_m, as functions
/// on the arc scheme.
std::vector<Poly> weil_expand(const Poly& f, const ArcScheme& arc);

/// The arc of a morphism phi: Z -> X along the same fat point.
Morphism arc_of_morphism(const Morphism& phi, const ArcScheme& source_arc, const ArcScheme& target_arc);

/// Map of arc spaces induced by an algebra map O_from -> O_to, where
/// from_arc is taken along O_from and to_arc along O_to (same base X).
Morphism induced_arc_map(const ArcScheme& from_arc, const ArcScheme& to_arc, const AlgebraMap& map);

/// Truncation arc_big X -> arc_small X for a closed immersion small <= big.
/// Throws NotClosedImmersion.
Morphism truncation_map(const ArcScheme& big, const ArcScheme& small);

/// Krull dimension of the Weil restriction.
std::size_t arc_dimension(const SchemePtr& x, const FatPointPtr& m, const Caps& caps = {});

/// Length-one arcs renamed back to the source coordinate names.
AffineScheme with_source_names(const ArcScheme& arc);

struct AdjunctionVerdict {
  std::uint64_t product_side = 0;  // |Hom(a x_k m, X)|
  std::uint64_t arc_side = 0;      // |Hom(a, arc_m X)|
  bool bijection = false;          // coefficient reindexing is a bijection
  bool holds() const { return bijection && product_side == arc_side; }
};

/// Enumerates both hom-sets over a finite field and checks the coefficient
/// reindexing between them.
AdjunctionVerdict adjunction_check(const SchemePtr& x, const FatPointPtr& m, const FatPointPtr& a,
                                   const Caps& caps = {});

/// Levelwise arcs along a simplicial fat point. The trivial functor gives a
/// simplicial scheme with arcs of the base structure maps. The fiber
/// functor (constant base only) yields structure maps induced by the
/// tensor-power cofaces, so they point upward in level.
struct SimplicialArc {
  FunctorTag tag;
  std::vector<ArcScheme> levels;
  std::vector<std::vector<Morphism>> faces;         // trivial: level n -> n-1
  std::vector<std::vector<Morphism>> degeneracies;  // trivial: level n -> n+1
  std::vector<std::vector<Morphism>> cofaces;       // fiber: level n-1 -> n, indexed by n
  std::vector<std::vector<Morphism>> codegeneracies;  // fiber: level n+1 -> n, indexed by n
};

SimplicialArc simplicial_arc(const SimplicialScheme& base, const SimplicialFatPoint& sfp, const Caps& caps = {});

}  // namespace motivic
