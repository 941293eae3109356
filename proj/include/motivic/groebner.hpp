#pragma once

#include <optional>
#include <vector>

#include "motivic/poly.hpp"

namespace motivic {

/// Reduced, monic Groebner basis in degrevlex order, sorted by decreasing
/// leading monomial. Buchberger with the product and chain criteria.
std::vector<Poly> reduced_groebner_basis(const PolyRing& ring, std::vector<Poly> generators);

/// Full reduction of p by the given divisors (any order of divisors).
Poly reduce(const Poly& p, const std::vector<Poly>& divisors);

/// Ideal in a polynomial ring with its reduced Groebner basis. The basis is
/// computed eagerly so instances are immutable and freely shareable.
class Ideal {
 public:
  Ideal(PolyRing ring, std::vector<Poly> generators);

  /// Zero ideal.
  explicit Ideal(PolyRing ring) : Ideal(ring, {}) {}

  const PolyRing& ring() const { return ring_; }
  const Field& field() const { return ring_.field(); }
  const std::vector<Poly>& generators() const { return generators_; }
  const std::vector<Poly>& basis() const { return basis_; }

  bool is_unit() const;
  bool is_zero() const { return basis_.empty(); }
  bool contains(const Poly& p) const;
  /// Every generator of other lies in this ideal (rings must agree).
  bool contains(const Ideal& other) const;

  Poly normal_form(const Poly& p) const;

 private:
  PolyRing ring_;
  std::vector<Poly> generators_;
  std::vector<Poly> basis_;
};

/// Remainder of p modulo the reduced basis of the ideal.
Poly normal_form(const Poly& p, const Ideal& ideal);

/// Standard monomials in increasing degrevlex order, or nullopt when there
/// are infinitely many.
std::optional<std::vector<Exponents>> quotient_basis(const Ideal& ideal);

struct KrullDimension {
  std::size_t dimension = 0;
  bool empty = false;  // unit ideal
};

/// Dimension of k[x]/I as the size of a largest variable set independent
/// modulo the leading-term ideal.
KrullDimension krull_dimension(const Ideal& ideal);

/// Ideal of the same generators read in a ring whose names contain ours;
/// variables of target absent from the source ring are sent to zero.
Ideal embed_ideal(const Ideal& ideal, const PolyRing& target);

}  // namespace motivic
