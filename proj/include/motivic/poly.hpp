#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motivic/field.hpp"

namespace motivic {

using Exponents = std::vector<std::uint16_t>;

unsigned total_degree(const Exponents& e);

/// Graded reverse lexicographic order, as a "greater than" relation so that
/// ordered containers list the leading term first.
struct DegRevLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// True iff a divides b.
bool divides(const Exponents& a, const Exponents& b);
Exponents lcm(const Exponents& a, const Exponents& b);

/// Field plus ordered variable names. Cheap to copy; compares by content.
class PolyRing {
 public:
  PolyRing(Field field, std::vector<std::string> names);

  const Field& field() const { return data_->field; }
  const std::vector<std::string>& names() const { return data_->names; }
  std::size_t size() const { return data_->names.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.data_ == b.data_ ||
           (a.data_->field == b.data_->field && a.data_->names == b.data_->names);
  }

 private:
  struct Data {
    Field field;
    std::vector<std::string> names;
  };
  std::shared_ptr<const Data> data_;
};

/// Sparse multivariate polynomial; terms are kept in degrevlex order with
/// no zero coefficients.
class Poly {
 public:
  using Terms = std::map<Exponents, Scalar, DegRevLexGreater>;

  explicit Poly(PolyRing ring) : ring_(std::move(ring)) {}

  static Poly constant(const PolyRing& ring, const Scalar& c);
  static Poly variable(const PolyRing& ring, std::size_t index);
  static Poly variable(const PolyRing& ring, std::string_view name);
  static Poly monomial(const PolyRing& ring, Exponents e, const Scalar& c);

  const PolyRing& ring() const { return ring_; }
  const Field& field() const { return ring_.field(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }

  /// Requires a nonzero polynomial.
  const Exponents& leading_monomial() const;
  const Scalar& leading_coefficient() const;
  Scalar constant_term() const;
  Scalar coefficient(const Exponents& e) const;
  unsigned degree() const;

  /// Indices of variables that occur.
  std::vector<std::size_t> support() const;

  void add_term(const Exponents& e, const Scalar& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator-() const;
  Poly scaled(const Scalar& c) const;
  Poly times_monomial(const Exponents& e, const Scalar& c) const;
  Poly pow(unsigned k) const;
  Poly monic() const;

  /// Replaces variable i by images[i]; all images share one target ring.
  Poly substitute(std::span<const Poly> images, const PolyRing& target) const;

  /// Same terms over another ring whose names extend or permute ours
  /// (matched by name). Throws if a used variable is missing.
  Poly rename_into(const PolyRing& target) const;

  std::string to_string() const;

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  PolyRing ring_;
  Terms terms_;
};

/// Parses expressions such as "x^2 - 3/2*x*y + 1" over the given ring.
Poly parse_poly(std::string_view text, const PolyRing& ring);

void require_same_ring(const PolyRing& a, const PolyRing& b, const char* what);

}  // namespace motivic
