#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motivic/algebra.hpp"
#include "motivic/error.hpp"

namespace motivic {

/// A finite local k-algebra k[y]/I with residue field k, certified by the
/// nilpotency of every presented generator.
class FatPoint {
 public:
  /// Throws NotFinite or NotLocal.
  static FatPoint make(const Ideal& presentation, const Caps& caps = {});
  /// Spec k: no variables.
  static FatPoint spec_k(const Field& field);
  /// k[t]/(t^n).
  static FatPoint jet(const Field& field, unsigned n, const std::string& var = "t");

  const QuotientAlgebra& algebra() const { return algebra_; }
  const Field& field() const { return algebra_.field(); }
  std::size_t length() const { return algebra_.dimension(); }
  /// "k[t]/(t^2)" style description.
  std::string to_string() const;

 private:
  explicit FatPoint(QuotientAlgebra algebra) : algebra_(std::move(algebra)) {}
  QuotientAlgebra algebra_;
};

using FatPointPtr = std::shared_ptr<const FatPoint>;

enum class FunctorTag { Trivial, Fiber, Symmetric };

const char* to_string(FunctorTag tag);

/// The levels [n] -> F(m)_n for n <= truncation level.
class SimplicialFatPoint {
 public:
  SimplicialFatPoint(FunctorTag tag, FatPointPtr base, std::size_t truncation_level);

  FunctorTag tag() const { return tag_; }
  const FatPointPtr& base() const { return base_; }
  std::size_t truncation_level() const { return levels_.empty() ? truncation_ : levels_.size() - 1; }

  /// Trivial levels share the base object. Symmetric has no ambient
  /// algebra and throws Unsupported.
  const FatPointPtr& level(std::size_t n) const;

  /// Structure maps as algebra maps: coface i sends O_{n-1} -> O_n by
  /// inserting 1 at tensor slot i; codegeneracy i sends O_{n+1} -> O_n by
  /// multiplying slots i and i+1. Only defined for the fiber functor.
  AlgebraMap coface(std::size_t n, std::size_t i) const;
  AlgebraMap codegeneracy(std::size_t n, std::size_t i) const;

 private:
  FunctorTag tag_;
  FatPointPtr base_;
  std::size_t truncation_;
  std::vector<FatPointPtr> levels_;
};

/// Chain of fat points m_0 <= m_1 <= ... ordered by closed immersion.
class PointSystem {
 public:
  using Rule = std::function<FatPoint(std::size_t)>;

  static PointSystem explicit_chain(std::vector<FatPointPtr> members);
  /// Members rule(first), rule(first+1), ...; labels follow the index.
  static PointSystem parametric(Rule rule, std::string description, std::size_t first = 1);
  /// The standard jet chain k[t]/(t^n), n >= 1.
  static PointSystem jets(const Field& field, const std::string& var = "t");

  bool is_parametric() const { return static_cast<bool>(rule_); }
  const std::string& description() const { return description_; }

  /// First `horizon` members (explicit chains are truncated to their size).
  std::vector<FatPointPtr> materialize(std::size_t horizon) const;
  /// Label of the member at a position (its index n for parametric chains).
  std::size_t label(std::size_t position) const { return is_parametric() ? first_ + position : position; }
  std::size_t explicit_size() const { return members_.size(); }

 private:
  std::vector<FatPointPtr> members_;
  Rule rule_;
  std::string description_;
  std::size_t first_ = 0;
};

struct ChainCheck {
  bool ok = true;
  std::size_t index = 0;  // position of the failing pair (m_index, m_index+1)
  std::string generator;  // generator of I_{index+1} outside I_index
};

/// Verifies I_{n+1} subset I_n for consecutive members up to the horizon.
ChainCheck chain_check(const PointSystem& system, std::size_t horizon);

/// True iff small is a closed subscheme of big (matched by variable name).
bool is_closed_subscheme(const FatPoint& small, const FatPoint& big);

/// Formal direct limit of a checked chain; never materialized.
class LimitPoint {
 public:
  /// Throws ChainFailure.
  LimitPoint(PointSystem system, std::size_t horizon);
  const PointSystem& system() const { return system_; }
  std::size_t horizon() const { return horizon_; }

 private:
  PointSystem system_;
  std::size_t horizon_;
};

}  // namespace motivic
