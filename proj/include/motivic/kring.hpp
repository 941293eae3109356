#pragma once

#include <map>
#include <optional>

#include "motivic/sieve.hpp"

namespace motivic {

/// A product of canonical factors times L^lexp. In a relative ring the
/// relative factor (if any) carries the structure map; none means [S].
struct Monomial {
  std::string relative;              // empty: the unit [S]
  std::vector<std::string> factors;  // sorted keys of absolute factors
  long lexp = 0;

  friend bool operator<(const Monomial& a, const Monomial& b) {
    return std::tie(a.factors, a.relative, a.lexp) < std::tie(b.factors, b.relative, b.lexp);
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors == b.factors && a.relative == b.relative && a.lexp == b.lexp;
  }
  std::string to_string() const;
};

/// Per-point counts over the base (one entry for the absolute ring).
using CountVector = std::vector<Scalar>;

/// Element of the Grothendieck ring, localized at L, kept in normal form:
/// unions are removed by the scissor relation, symbols are canonicalized
/// and zero coefficients dropped. base == nullptr is the absolute ring.
class KClass {
 public:
  KClass() = default;
  explicit KClass(SchemePtr base) : base_(std::move(base)) {}

  static KClass one(const SchemePtr& base = nullptr);
  static KClass lefschetz(long z = 1, const SchemePtr& base = nullptr);
  static KClass integer(long n, const SchemePtr& base = nullptr);
  /// [s] after scissor rewriting.
  static KClass of(const SieveExpr& s);
  static KClass of(const SchemePtr& x);
  static KClass of(const RelativeSieve& s);
  /// Formal k-th symmetric power of a (set-level) class.
  static KClass sym(unsigned k, const KClass& inner);

  const SchemePtr& base() const { return base_; }
  const std::map<Monomial, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  KClass& operator+=(const KClass& o);
  KClass& operator-=(const KClass& o);
  friend KClass operator+(KClass a, const KClass& b) { return a += b; }
  friend KClass operator-(KClass a, const KClass& b) { return a -= b; }
  friend KClass operator*(const KClass& a, const KClass& b);
  KClass operator-() const;
  KClass scaled(const Integer& c) const;
  KClass pow(unsigned k) const;
  friend bool operator==(const KClass& a, const KClass& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

  void add_term(const Monomial& m, const Integer& c);

 private:
  SchemePtr base_;
  std::map<Monomial, Integer> terms_;
};

/// Recomputes the normal form symbol by symbol (idempotent).
KClass normalize(const KClass& c);

/// Point count at m: coefficients times member counts, L counted as |O_m|
/// and L^-1 as its reciprocal. Relative classes give one entry per point
/// of the base (in enumeration order).
CountVector counting_vector(const KClass& c, const FatPointPtr& m, const Caps& caps = {});
Scalar counting_hom(const KClass& c, const FatPointPtr& m, const Caps& caps = {});

/// Pushforward along f: S -> S' (recompose the structure map) and pullback
/// along f (fiber product with S).
KClass pushforward(const Morphism& f, const KClass& c);
KClass pullback(const Morphism& f, const KClass& c);

/// Relative sieve whose class is the given single-factor monomial.
RelativeSieve pullback_sieve(const Morphism& f, const RelativeSieve& y);

/// Level-indexed classes 0..N with levelwise ring operations.
class SimplicialClass {
 public:
  SimplicialClass() = default;
  explicit SimplicialClass(std::vector<KClass> levels, bool strictly_schemic = false);

  static SimplicialClass of(const SimplicialSieve& s);
  /// Image of a plain class under the trivial, fiber or symmetric functor.
  static SimplicialClass g(FunctorTag tag, const KClass& c, std::size_t top_level);
  /// [n] -> A^z at every level.
  static SimplicialClass lefschetz(std::size_t top_level, long z = 1);
  /// [n] -> L^q(n).
  static SimplicialClass lefschetz_rule(std::size_t top_level, const std::function<long(std::size_t)>& q);

  std::size_t top_level() const { return levels_.size() - 1; }
  const std::vector<KClass>& levels() const { return levels_; }
  /// Level-n class; throws LevelOutOfRange.
  const KClass& h(std::size_t n) const;
  bool strictly_schemic() const { return strictly_schemic_; }

  SimplicialClass& operator+=(const SimplicialClass& o);
  SimplicialClass& operator-=(const SimplicialClass& o);
  friend SimplicialClass operator+(SimplicialClass a, const SimplicialClass& b) { return a += b; }
  friend SimplicialClass operator-(SimplicialClass a, const SimplicialClass& b) { return a -= b; }
  friend SimplicialClass operator*(const SimplicialClass& a, const SimplicialClass& b);
  friend bool operator==(const SimplicialClass& a, const SimplicialClass& b) { return a.levels_ == b.levels_; }

  std::string to_string() const;

 private:
  std::vector<KClass> levels_;
  bool strictly_schemic_ = false;
};

/// For strictly schemic generators, h_n separates distinct classes.
bool h_injective_on(const std::vector<SimplicialClass>& generators, std::size_t n);

struct HomVerdict {
  std::uint64_t left = 0;
  std::uint64_t right = 0;
  bool mutual_inverse = true;
  std::string detail;
  bool holds() const { return left == right && mutual_inverse; }
};

/// Hom((Y)_., X_.) against Hom(Y, X_n) at the fat point m, through
/// restriction to level n and constant extension.
HomVerdict tau_adjunction_check(const SieveExpr& y, const SimplicialSieve& x, std::size_t n, const FatPointPtr& m,
                                const Caps& caps = {});

/// Hom_{S'}(f_* X, Y) against Hom_S(X, f^* Y) at m.
HomVerdict pushpull_adjunction_check(const Morphism& f, const RelativeSieve& x, const RelativeSieve& y,
                                     const FatPointPtr& m, const Caps& caps = {});

/// Relative rings over the levels S^(n+1) of the Cech nerve of S, with
/// face-induced push and pull maps.
class CechKRing {
 public:
  CechKRing(const SchemePtr& s, std::size_t top_level);

  const SchemePtr& base(std::size_t n) const { return nerve_.levels.at(n); }
  const Morphism& face(std::size_t n, std::size_t i) const { return nerve_.faces.at(n).at(i); }
  KClass push(std::size_t n, std::size_t i, const KClass& c) const;  // K(S_n) -> K(S_{n-1})
  KClass pull(std::size_t n, std::size_t i, const KClass& c) const;  // K(S_{n-1}) -> K(S_n)
  /// d_i d_j = d_{j-1} d_i for i < j on pushforwards of c from level n.
  std::optional<std::string> check_identities(std::size_t n, const KClass& c) const;

 private:
  SimplicialScheme nerve_;
};

}  // namespace motivic
