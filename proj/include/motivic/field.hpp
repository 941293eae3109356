#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace motivic {

using Scalar = mpq_class;
using Integer = mpz_class;

/// Coefficient field: the rationals or a prime field F_p with p < 2^16.
class Field {
 public:
  enum class Kind { Rationals, Prime };

  static Field rationals() { return Field(Kind::Rationals, 0); }
  static Field prime(std::uint32_t p);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Prime; }
  std::uint32_t characteristic() const { return p_; }

  /// Brings an arbitrary rational into canonical form for this field.
  Scalar reduce(const Scalar& x) const;

  Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
  Scalar neg(const Scalar& a) const { return reduce(-a); }
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  /// Residue of a canonical scalar in [0, p). Only valid for prime fields.
  std::uint32_t to_residue(const Scalar& x) const;

  std::string to_string() const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  Field(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint32_t p_;
};

bool is_prime(std::uint32_t n);

/// a^-1 mod p for 0 < a < p.
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

}  // namespace motivic
