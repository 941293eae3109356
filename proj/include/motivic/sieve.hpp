#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "motivic/arc.hpp"

namespace motivic {

enum class SieveKind { Full, Empty, Closed, Open, Image, Union, Intersection };

/// A subfunctor of the point functor of an affine ambient, written as a
/// union/intersection term over closed subschemes, principal opens and
/// images of morphisms. Nodes are immutable and shared.
class SieveExpr {
 public:
  static SieveExpr full(SchemePtr ambient);
  static SieveExpr empty(SchemePtr ambient);
  static SieveExpr closed(SchemePtr ambient, std::vector<Poly> equations);
  static SieveExpr open(SchemePtr ambient, Poly g);
  static SieveExpr image(Morphism phi);

  friend SieveExpr operator|(const SieveExpr& a, const SieveExpr& b);
  friend SieveExpr operator&(const SieveExpr& a, const SieveExpr& b);

  SieveKind kind() const;
  const SchemePtr& ambient() const { return ambient_; }
  const std::vector<Poly>& equations() const;  // Closed
  const Poly& function() const;                 // Open
  const Morphism& morphism() const;             // Image
  const SieveExpr& left() const;                // Union, Intersection
  const SieveExpr& right() const;

  std::size_t union_count() const;
  bool has_image() const;
  std::string to_string() const;
  /// Node identity; equal ids mean equal expressions.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  SieveExpr(SchemePtr ambient, std::shared_ptr<const Node> node);
  SchemePtr ambient_;
  std::shared_ptr<const Node> node_;
};

/// Throws AmbientMismatch unless both ambients present the same scheme.
void require_same_ambient(const SchemePtr& a, const SchemePtr& b, const char* what);

/// Membership test for points of a fat point over a finite field, on flat
/// F_p coordinates. Image leaves are materialized once on construction.
class SieveEvaluator {
 public:
  SieveEvaluator(const SieveExpr& s, const FatPointPtr& m, const Caps& caps = {});

  const FpAlgebra& algebra() const { return *alg_; }
  bool contains(std::span<const std::uint32_t> flat) const;

  /// Equations every member satisfies; used to prune enumeration.
  const std::vector<Poly>& forced_equations() const { return forced_; }

 private:
  struct Leaf;
  bool eval(const SieveExpr& s, std::span<const std::uint32_t> flat) const;

  SieveExpr sieve_;
  std::shared_ptr<const FpAlgebra> alg_;
  std::vector<Poly> forced_;
  std::map<const void*, std::shared_ptr<Leaf>> leaves_;
};

/// Applies a morphism to flat points over a fixed algebra.
class PointMap {
 public:
  PointMap(const Morphism& phi, const FpAlgebra& algebra);
  FlatPoint operator()(std::span<const std::uint32_t> flat) const;

 private:
  const FpAlgebra* alg_;
  std::vector<CompiledPoly> images_;
};

/// Exact membership over any field for closed and open leaves; image leaves
/// need a finite field.
bool member(const SchemePoint& p, const SieveExpr& s, const Caps& caps = {});

std::vector<FlatPoint> flat_points(const SieveExpr& s, const FatPointPtr& m, const Caps& caps = {});
std::vector<SchemePoint> points(const SieveExpr& s, const FatPointPtr& m, const Caps& caps = {});
std::uint64_t count(const SieveExpr& s, const FatPointPtr& m, const Caps& caps = {});

/// Pullback along coordinate images (functions on new_ambient, one per
/// ambient coordinate of sub). Closed and open leaves are substituted; an
/// image leaf becomes the image of the fiber product.
SieveExpr pullback(const SchemePtr& new_ambient, std::span<const Poly> images, const SieveExpr& sub);
SieveExpr pullback(const Morphism& phi, const SieveExpr& sub);

/// a x b inside the product of the ambients.
struct SieveProduct {
  ProductScheme ambient;
  SieveExpr sieve;
};
SieveProduct product(const SieveExpr& a, const SieveExpr& b);

/// X + Y presented with an idempotent selector e: the first summand is
/// e = 0 (second coordinates vanish), the second is e = 1.
struct Coproduct {
  SchemePtr scheme;
  SchemePtr first;
  SchemePtr second;
  std::size_t selector = 0;
  std::vector<Poly> first_coordinates;   // x_i restricted to the first summand
  std::vector<Poly> second_coordinates;  // y_j restricted to the second summand
};
Coproduct coproduct(const SchemePtr& x, const SchemePtr& y);

struct SieveSum {
  Coproduct ambient;
  SieveExpr sieve;
};
SieveSum disjoint_union(const SieveExpr& a, const SieveExpr& b);

/// Syntactic test: s is host & (union of principal opens), up to the order
/// of the intersected factors.
bool is_admissible_open(const SieveExpr& s, const SieveExpr& host);

struct ContinuityVerdict {
  bool pass = true;
  std::size_t failing_entry = 0;
  std::string counterexample;
};

/// For a morphism phi from the ambient of source_host into the ambient of
/// target_host, and battery entries (m, W) with W an admissible open of
/// target_host, compares the pullback of W restricted to source_host with
/// the admissible open source_host & pullback(open part of W) at m.
ContinuityVerdict continuity_probe(const Morphism& phi, const SieveExpr& source_host, const SieveExpr& target_host,
                                   const std::vector<std::pair<FatPointPtr, SieveExpr>>& battery,
                                   const Caps& caps = {});

/// A sieve with a structure morphism from its ambient to the base S.
struct RelativeSieve {
  SieveExpr sieve;
  Morphism structure;

  RelativeSieve(SieveExpr sieve, Morphism structure);
  const SchemePtr& base() const { return structure.target(); }
  /// S over itself.
  static RelativeSieve unit(const SchemePtr& base);
};

RelativeSieve fiber_product(const RelativeSieve& a, const RelativeSieve& b);

/// Number of member points over each point of the base at m, in the order
/// of points(base, m).
std::vector<std::uint64_t> fiber_counts(const RelativeSieve& s, const FatPointPtr& m, const Caps& caps = {});

enum class SimplicialShape { Constant, Fiber, General };

/// Level sieves inside a simplicial ambient, truncated at the top level.
/// Fiber sieves have levels a^(n+1) with faces dropping a factor. When
/// symmetric is set, level sets are read modulo permutation of the factors
/// (set level only; faces are not available).
struct SimplicialSieve {
  SimplicialScheme ambient;
  std::vector<SieveExpr> levels;
  SimplicialShape shape = SimplicialShape::General;
  bool symmetric = false;
  std::optional<SieveExpr> generator;  // level-0 sieve for constant/fiber shapes

  static SimplicialSieve constant(const SieveExpr& s, std::size_t top_level);
  static SimplicialSieve fiber(const SieveExpr& s, std::size_t top_level);
  static SimplicialSieve symmetric_power(const SieveExpr& s, std::size_t top_level);
  static SimplicialSieve functor(FunctorTag tag, const SieveExpr& s, std::size_t top_level);
  static SimplicialSieve general(SimplicialScheme ambient, std::vector<SieveExpr> levels);

  std::size_t top_level() const { return levels.size() - 1; }
  const SieveExpr& level(std::size_t n) const;
  /// Factor count of a level's ambient for fiber-built sieves (n + 1).
  std::size_t blocks(std::size_t n) const;
};

SimplicialSieve operator|(const SimplicialSieve& a, const SimplicialSieve& b);
SimplicialSieve operator&(const SimplicialSieve& a, const SimplicialSieve& b);
SimplicialSieve product(const SimplicialSieve& a, const SimplicialSieve& b);
SimplicialSieve disjoint_union(const SimplicialSieve& a, const SimplicialSieve& b);

/// |s(m)_n|; symmetric sieves count orbits by sorting factor blocks.
std::uint64_t level_count(const SimplicialSieve& s, const FatPointPtr& m, std::size_t n, const Caps& caps = {});

/// Faces and degeneracies of the ambient send member points to member
/// points at m. Returns a description of the first violation.
std::optional<std::string> check_structure(const SimplicialSieve& s, const FatPointPtr& m, const Caps& caps = {});

/// The sieve of arcs whose adjoint point lies in s.
SieveExpr arc_sieve(const SieveExpr& s, const ArcScheme& arc, const Caps& caps = {});

/// Family of sieves in the arc spaces along a point system.
class LimitSieve {
 public:
  /// rule(position, arc) gives the member inside arc.scheme.
  using Rule = std::function<SieveExpr(std::size_t, const ArcScheme&)>;

  LimitSieve(SieveExpr base, PointSystem system, Rule rule, std::string description);

  /// Every arc of the base.
  static LimitSieve full_arcs(const SieveExpr& base, PointSystem system);
  /// Arcs whose truncation to the first member of the system lies in a.
  static LimitSieve cylinder(const SieveExpr& base, PointSystem system, SieveExpr a);

  const SieveExpr& base() const { return base_; }
  const PointSystem& system() const { return system_; }
  const std::string& description() const { return description_; }

  struct Member {
    FatPointPtr point;
    ArcScheme arc;
    SieveExpr sieve;
  };

  /// Members at positions 0..horizon-1 (capped by an explicit chain).
  /// Checks chains, inclusion into the arc of the base and truncation
  /// compatibility on points over the battery fat points.
  std::vector<Member> materialize(std::size_t horizon, const std::vector<FatPointPtr>& battery,
                                  const Caps& caps = {}) const;

 private:
  SieveExpr base_;
  PointSystem system_;
  Rule rule_;
  std::string description_;
};

}  // namespace motivic
