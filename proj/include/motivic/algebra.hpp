#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "motivic/groebner.hpp"

namespace motivic {

/// Coordinates over the standard-monomial basis of a finite algebra.
using Element = std::vector<Scalar>;

/// Finite-dimensional quotient k[y]/I with its standard-monomial basis and
/// multiplication table.
class QuotientAlgebra {
 public:
  /// Throws NotFinite when the quotient is infinite dimensional.
  explicit QuotientAlgebra(Ideal presentation);

  const Ideal& presentation() const { return presentation_; }
  const PolyRing& ring() const { return presentation_.ring(); }
  const Field& field() const { return presentation_.field(); }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Exponents>& basis() const { return basis_; }
  /// Index of a standard monomial, or -1.
  std::ptrdiff_t basis_index(const Exponents& e) const;

  Element zero() const { return Element(dimension(), 0); }
  Element one() const;
  Element coordinates(const Poly& p) const;  // p in ring(); reduced first
  Poly to_poly(const Element& e) const;

  Element add(const Element& a, const Element& b) const;
  Element multiply(const Element& a, const Element& b) const;
  Element scale(const Element& a, const Scalar& c) const;

  /// f(images) where f lives in any ring with one image per variable.
  Element evaluate(const Poly& f, std::span<const Element> images) const;

  bool is_nilpotent(const Element& e) const;
  /// In a local algebra with nilpotent generators: constant coordinate != 0.
  bool is_unit(const Element& e) const;

  /// Coordinates of b_i * b_j.
  const Element& product_of_basis(std::size_t i, std::size_t j) const {
    return table_[i * dimension() + j];
  }

 private:
  Ideal presentation_;
  std::vector<Exponents> basis_;
  std::vector<Element> table_;
};

/// Presentation on the disjoint union of the variable lists. Colliding
/// names of the second factor get primes appended.
QuotientAlgebra tensor_product(const QuotientAlgebra& a, const QuotientAlgebra& b);

/// k-algebra homomorphism source -> target given by images of the source
/// variables, checked to be well defined.
class AlgebraMap {
 public:
  AlgebraMap(const QuotientAlgebra& source, const QuotientAlgebra& target, std::vector<Poly> images);

  /// Sends each variable to the target variable with the same name, or to
  /// zero if absent. Used for closed immersions of fat points.
  static AlgebraMap by_name(const QuotientAlgebra& source, const QuotientAlgebra& target);

  /// matrix()[k][j]: coordinate k (target basis) of the image of basis j.
  const std::vector<std::vector<Scalar>>& matrix() const { return matrix_; }
  Element apply(const Element& e) const;
  bool is_surjective() const;

 private:
  Field field_;
  std::size_t target_dim_;
  std::vector<std::vector<Scalar>> matrix_;
};

/// Dense arithmetic on a finite algebra over F_p with 32-bit residues; the
/// enumeration engine runs on this.
class FpAlgebra {
 public:
  explicit FpAlgebra(const QuotientAlgebra& algebra);

  std::uint32_t p() const { return p_; }
  std::size_t dimension() const { return dim_; }
  /// p^dimension, or 0 on overflow of 64 bits.
  std::uint64_t cardinality() const;

  void add(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::span<std::uint32_t> out) const;
  void multiply(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                std::span<std::uint32_t> out) const;
  /// Writes the index-th element (base-p digits) into out.
  void decode(std::uint64_t index, std::span<std::uint32_t> out) const;

  Element to_element(std::span<const std::uint32_t> a) const;
  std::vector<std::uint32_t> from_element(const Element& e) const;

 private:
  struct Entry {
    std::uint32_t k;
    std::uint32_t c;
  };
  std::uint32_t p_;
  std::size_t dim_;
  std::vector<std::vector<Entry>> table_;  // (i*dim + j) -> sparse coordinates
};

/// Polynomial compiled for evaluation in an FpAlgebra.
class CompiledPoly {
 public:
  CompiledPoly(const Poly& f, std::uint32_t p);

  /// Largest variable index used, or -1 for constants.
  std::ptrdiff_t last_variable() const { return last_var_; }

  /// values: flat array, variable v occupying [v*dim, (v+1)*dim).
  void evaluate(const FpAlgebra& alg, std::span<const std::uint32_t> values, std::span<std::uint32_t> out) const;
  bool vanishes(const FpAlgebra& alg, std::span<const std::uint32_t> values) const;

 private:
  struct Term {
    std::uint32_t coeff;
    std::vector<std::pair<std::uint32_t, std::uint16_t>> factors;
  };
  std::vector<Term> terms_;
  std::ptrdiff_t last_var_ = -1;
};

}  // namespace motivic
