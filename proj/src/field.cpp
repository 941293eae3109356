#include "motivic/field.hpp"

#include "motivic/error.hpp"

namespace motivic {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::VariableMismatch: return "variable-mismatch";
    case ErrorKind::FieldMismatch: return "field-mismatch";
    case ErrorKind::NotFinite: return "not-finite";
    case ErrorKind::NotLocal: return "not-local";
    case ErrorKind::InfiniteField: return "infinite-field";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::AmbientMismatch: return "ambient-mismatch";
    case ErrorKind::BaseMismatch: return "base-mismatch";
    case ErrorKind::LevelOutOfRange: return "level-out-of-range";
    case ErrorKind::NotClosedImmersion: return "not-closed-immersion";
    case ErrorKind::ChainFailure: return "chain-failure";
    case ErrorKind::Incompatible: return "incompatible";
  }
  return "unknown";
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) fail(ErrorKind::InvalidArgument, "element is not invertible");
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1u << 16)) fail(ErrorKind::InvalidArgument, "characteristic must be below 2^16");
  return Field(Kind::Prime, p);
}

Scalar Field::reduce(const Scalar& x) const {
  if (kind_ == Kind::Rationals) {
    Scalar r = x;
    r.canonicalize();
    return r;
  }
  mpz_class num = x.get_num() % p_;
  if (num < 0) num += p_;
  mpz_class den = x.get_den() % p_;
  if (den == 0) fail(ErrorKind::InvalidArgument, "denominator divisible by characteristic");
  std::uint32_t n = static_cast<std::uint32_t>(num.get_ui());
  std::uint32_t d = static_cast<std::uint32_t>(den.get_ui());
  std::uint64_t v = (std::uint64_t{n} * inverse_mod(d, p_)) % p_;
  return Scalar(static_cast<unsigned long>(v));
}

Scalar Field::inv(const Scalar& a) const {
  if (a == 0) fail(ErrorKind::InvalidArgument, "division by zero");
  if (kind_ == Kind::Rationals) return Scalar(1) / a;
  return Scalar(static_cast<unsigned long>(inverse_mod(to_residue(a), p_)));
}

std::uint32_t Field::to_residue(const Scalar& x) const {
  return static_cast<std::uint32_t>(reduce(x).get_num().get_ui());
}

std::string Field::to_string() const {
  return kind_ == Kind::Rationals ? "Q" : "F" + std::to_string(p_);
}

}  // namespace motivic
