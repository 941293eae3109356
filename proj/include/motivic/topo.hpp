#pragma once

#include "motivic/sieve.hpp"

namespace motivic {

/// Finite simplicial set truncated at a top level; elements of level n are
/// 0..size(n)-1. The simplicial identities are checked on construction.
class FiniteSimplicialSet {
 public:
  using Map = std::vector<std::size_t>;

  FiniteSimplicialSet(std::vector<std::size_t> sizes, std::vector<std::vector<Map>> faces,
                      std::vector<std::vector<Map>> degeneracies, std::vector<std::vector<std::string>> labels = {});

  /// Nerve of {0 < 1 < ... < k} (nondecreasing sequences), up to top_level.
  static FiniteSimplicialSet standard_simplex(std::size_t k, std::size_t top_level);
  /// Sequences of the nerve missing at least one vertex.
  static FiniteSimplicialSet boundary_simplex(std::size_t k, std::size_t top_level);
  /// Constant simplicial set on `points` elements.
  static FiniteSimplicialSet discrete(std::size_t points, std::size_t top_level);
  static FiniteSimplicialSet disjoint_union(const FiniteSimplicialSet& a, const FiniteSimplicialSet& b);

  std::size_t top_level() const { return sizes_.size() - 1; }
  std::size_t size(std::size_t n) const { return sizes_.at(n); }
  std::size_t face(std::size_t n, std::size_t i, std::size_t x) const { return faces_.at(n).at(i).at(x); }
  std::size_t degeneracy(std::size_t n, std::size_t i, std::size_t x) const { return degeneracies_.at(n).at(i).at(x); }
  const std::string& label(std::size_t n, std::size_t x) const { return labels_.at(n).at(x); }

  /// Elements of level n outside the images of the degeneracies.
  std::vector<std::size_t> nondegenerate(std::size_t n) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<Map>> faces_;         // faces_[n][i] : level n -> n-1
  std::vector<std::vector<Map>> degeneracies_;  // degeneracies_[n][i] : level n -> n+1
  std::vector<std::vector<std::string>> labels_;
};

/// Levelwise point sets of s at m with the induced faces and degeneracies.
FiniteSimplicialSet evaluate_to_sset(const SimplicialSieve& s, const FatPointPtr& m, const Caps& caps = {});

struct HomologyGroup {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
  std::string to_string() const;
};

struct RealizationInvariants {
  std::size_t components = 0;
  long euler = 0;
  std::vector<HomologyGroup> homology;  // degrees 0..top level (the top is that of the skeleton)
  std::string key() const;
};

/// Components, Euler characteristic and integral homology of the realization
/// of the skeleton. Throws CapExceeded above max_cells nondegenerate cells.
RealizationInvariants invariants(const FiniteSimplicialSet& a, const Caps& caps = {});

/// Invariant ranks and torsion of an integer matrix.
struct SmithForm {
  std::size_t rank = 0;
  std::vector<Integer> factors;  // nonzero diagonal entries, dividing each other
};
SmithForm smith_normal_form(std::vector<std::vector<Integer>> matrix);

/// Coarse key (components, chi, homology). Equal keys are necessary, not
/// sufficient, for homotopy equivalence.
std::string homotopy_class_key(const FiniteSimplicialSet& a, const Caps& caps = {});

struct PreservationVerdict {
  bool pass = true;
  std::string detail;
};

/// Levelwise comparison of |a | b|, |a & b| and |a x b| with the set-level
/// union, intersection and product of |a| and |b|, faces included.
PreservationVerdict preservation_check(const SimplicialSieve& a, const SimplicialSieve& b, const FatPointPtr& m,
                                       const Caps& caps = {});

/// Nerve of a finite relation on k-points of x, as a simplicial sieve in the
/// fiber powers of x: level 0 holds the points named by the relation and
/// level n the chains p_0 R p_1 R ... R p_n. Meant for
/// reflexive, transitive relations (posets) evaluated at Spec k.
SimplicialSieve nerve_sieve(const SchemePtr& x, const std::vector<std::vector<long>>& points,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t top_level);

}  // namespace motivic
