#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "motivic/fatpoint.hpp"

namespace motivic {

/// Spec k[x_1..x_n]/(f_1..f_r).
class AffineScheme {
 public:
  AffineScheme(std::string name, Ideal presentation);

  /// Applies the variable and degree caps to the presented generators.
  static AffineScheme make(std::string name, Ideal presentation, const Caps& caps);
  static AffineScheme affine_space(const Field& field, std::vector<std::string> names, std::string name = "A");
  static AffineScheme spec_k(const Field& field);

  const std::string& name() const { return name_; }
  const Ideal& presentation() const { return presentation_; }
  const PolyRing& ring() const { return presentation_.ring(); }
  const Field& field() const { return presentation_.field(); }
  std::size_t dimension_of_ambient() const { return ring().size(); }
  /// Generators as written, without the Groebner completion.
  const std::vector<Poly>& equations() const { return presentation_.generators(); }

  std::string to_string() const;

  /// Same ring and same ideal (compared through reduced bases).
  bool same_as(const AffineScheme& other) const;

 private:
  std::string name_;
  Ideal presentation_;
};

using SchemePtr = std::shared_ptr<const AffineScheme>;

/// Morphism given by polynomial images of the target coordinates. The
/// constructor checks that target relations pull back into the source ideal.
class Morphism {
 public:
  Morphism(SchemePtr source, SchemePtr target, std::vector<Poly> images);

  static Morphism identity(const SchemePtr& x);

  const SchemePtr& source() const { return source_; }
  const SchemePtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }

  /// f o phi for a function f on the target.
  Poly pull(const Poly& f) const;
  /// this o first.
  Morphism after(const Morphism& first) const;

  std::string to_string() const;

 private:
  SchemePtr source_;
  SchemePtr target_;
  std::vector<Poly> images_;
};

/// Product X x Y; colliding names in Y get primes appended. Also returns
/// the two projections.
struct ProductScheme {
  SchemePtr scheme;
  Morphism first;
  Morphism second;
};
ProductScheme product(const SchemePtr& x, const SchemePtr& y);

/// Levels X_0..X_N with faces[n][i]: X_n -> X_{n-1} (n >= 1, i <= n) and
/// degeneracies[n][i]: X_n -> X_{n+1} (n < N, i <= n).
struct SimplicialScheme {
  std::vector<SchemePtr> levels;
  std::vector<std::vector<Morphism>> faces;
  std::vector<std::vector<Morphism>> degeneracies;

  static SimplicialScheme constant(const SchemePtr& x, std::size_t top_level);
  std::size_t top_level() const { return levels.size() - 1; }
  bool is_constant() const;
};

/// A morphism Spec O_m -> X: images of the coordinates in O_m.
struct SchemePoint {
  FatPointPtr target;
  std::vector<Element> images;
};

/// Flat F_p coordinates of a point: variable v occupies [v*l, (v+1)*l).
using FlatPoint = std::vector<std::uint32_t>;

/// Depth-first enumeration of F_p-points of a polynomial system in a finite
/// algebra, rejecting a branch as soon as an equation whose variables are all
/// assigned fails. Variables may be pinned to fixed values.
class PointEnumerator {
 public:
  PointEnumerator(const FpAlgebra& algebra, const PolyRing& ring, const std::vector<Poly>& equations,
                  std::uint64_t max_nodes);

  void pin(std::size_t var, std::span<const std::uint32_t> value);

  /// visit returns false to stop early.
  void for_each(const std::function<bool(std::span<const std::uint32_t>)>& visit);
  std::uint64_t count();
  std::uint64_t nodes_visited() const { return nodes_; }

 private:
  bool descend(std::size_t var, const std::function<bool(std::span<const std::uint32_t>)>& visit);

  const FpAlgebra& alg_;
  std::size_t nvars_;
  std::vector<std::vector<CompiledPoly>> checks_;  // by last variable
  std::vector<CompiledPoly> constants_;
  std::vector<std::vector<std::uint32_t>> pinned_;
  FlatPoint current_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
};

/// Hom(m, X): every algebra map O_X -> O_m. Finite fields only.
std::vector<SchemePoint> points(const AffineScheme& x, const FatPointPtr& m, const Caps& caps = {});

/// Images of a point under a morphism.
SchemePoint apply(const Morphism& phi, const SchemePoint& p);

/// Every defining equation of X vanishes at p.
bool lies_on(const SchemePoint& p, const AffineScheme& x);

std::string to_string(const SchemePoint& p);

}  // namespace motivic
