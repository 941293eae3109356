#pragma once

#include "motivic/kring.hpp"

namespace motivic {

/// Exponent rule indexed by the label of a system member.
using LaxRule = std::function<long(std::size_t)>;

struct MeasureQuery {
  LimitSieve subject;
  Scalar q = 0;
  LaxRule lax;                       // empty: no lax correction
  std::string lax_description;
  std::optional<Morphism> structure;  // base ambient -> S for relative classes
  std::size_t horizon = 8;
  std::size_t window = 3;
  std::vector<FatPointPtr> battery;  // used for the compatibility checks
  Caps caps;

  explicit MeasureQuery(LimitSieve subject) : subject(std::move(subject)) {}
};

enum class MeasureMode { Finite, Limit, Lax, Relative, Indexed };

const char* to_string(MeasureMode mode);

struct MeasureTerm {
  FatPointPtr point;
  std::size_t label = 0;
  KClass member;
  long exponent = 0;  // -ceil(Q dim) - l(m)
  KClass value;
};

struct MeasureReport {
  MeasureMode mode = MeasureMode::Limit;
  std::vector<MeasureTerm> sequence;
  bool stabilized = false;
  KClass value;           // meaningful when stabilized
  std::size_t since = 0;  // first position of the constant tail
  std::size_t horizon = 0;
  std::string lax;

  std::string verdict() const;
};

/// [arc_m s] with no Lefschetz correction.
KClass finite_measure(const SieveExpr& s, const FatPointPtr& m, const Caps& caps = {});
KClass finite_measure(const SchemePtr& x, const FatPointPtr& m, const Caps& caps = {});

/// [s] times [arc_m X] L^-ceil(dim arc_m X).
KClass integral_form(const SieveExpr& s, const SchemePtr& x, const FatPointPtr& m, const Caps& caps = {});

/// ceil(q * d) for rational q.
long ceil_product(const Scalar& q, std::size_t d);

/// Runs the sequence s_m = [member] L^(-ceil(Q dim) - l(m)) and folds the
/// window verdict. A finite explicit system is evaluated at its last member.
MeasureReport limit_measure(const MeasureQuery& q);
/// As limit_measure; requires a lax rule.
MeasureReport lax_measure(const MeasureQuery& q);
/// Q = 1 measure of a truncation-compatible family given as a limit sieve.
MeasureReport stable_set_measure(const LimitSieve& family, std::size_t horizon = 8, std::size_t window = 3,
                                 const std::vector<FatPointPtr>& battery = {}, const Caps& caps = {});
/// Same computation with the mode tagged as indexed.
MeasureReport indexed_mode(const MeasureQuery& q);
/// Independent runs, one per level family.
std::vector<MeasureReport> indexed_levels(const std::vector<MeasureQuery>& levels);

}  // namespace motivic
