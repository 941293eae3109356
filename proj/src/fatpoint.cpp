#include "motivic/fatpoint.hpp"

#include <algorithm>

namespace motivic {

const char* to_string(FunctorTag tag) {
  switch (tag) {
    case FunctorTag::Trivial: return "trivial";
    case FunctorTag::Fiber: return "fiber";
    case FunctorTag::Symmetric: return "sym";
  }
  return "?";
}

FatPoint FatPoint::make(const Ideal& presentation, const Caps& caps) {
  if (presentation.ring().size() > caps.max_variables)
    fail(ErrorKind::CapExceeded, "fat point presentation has too many variables");
  if (presentation.is_unit()) fail(ErrorKind::NotLocal, "unit ideal presents the empty scheme");
  auto basis = quotient_basis(presentation);
  if (!basis) fail(ErrorKind::NotFinite, "presentation is not finite dimensional");
  QuotientAlgebra algebra(presentation);
  for (std::size_t v = 0; v < presentation.ring().size(); ++v) {
    Element y = algebra.coordinates(Poly::variable(presentation.ring(), v));
    if (!algebra.is_nilpotent(y))
      fail(ErrorKind::NotLocal, "generator '" + presentation.ring().names()[v] + "' is not nilpotent");
  }
  return FatPoint(std::move(algebra));
}

FatPoint FatPoint::spec_k(const Field& field) { return FatPoint(QuotientAlgebra(Ideal(PolyRing(field, {})))); }

FatPoint FatPoint::jet(const Field& field, unsigned n, const std::string& var) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "jet order must be positive");
  PolyRing ring(field, {var});
  return make(Ideal(ring, {Poly::variable(ring, 0).pow(n)}));
}

std::string FatPoint::to_string() const {
  const auto& ring = algebra_.ring();
  if (ring.size() == 0) return "k";
  std::string s = "k[";
  for (std::size_t i = 0; i < ring.size(); ++i) s += (i ? "," : "") + ring.names()[i];
  s += "]/(";
  const auto& gens = algebra_.presentation().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + gens[i].to_string();
  return s + ")";
}

SimplicialFatPoint::SimplicialFatPoint(FunctorTag tag, FatPointPtr base, std::size_t truncation_level)
    : tag_(tag), base_(std::move(base)), truncation_(truncation_level) {
  if (tag_ == FunctorTag::Symmetric) return;
  levels_.push_back(base_);
  for (std::size_t n = 1; n <= truncation_level; ++n) {
    if (tag_ == FunctorTag::Trivial) {
      levels_.push_back(base_);
    } else {
      QuotientAlgebra power = tensor_product(levels_.back()->algebra(), base_->algebra());
      levels_.push_back(std::make_shared<const FatPoint>(FatPoint::make(power.presentation(), Caps{64})));
    }
  }
}

const FatPointPtr& SimplicialFatPoint::level(std::size_t n) const {
  if (tag_ == FunctorTag::Symmetric)
    fail(ErrorKind::Unsupported, "symmetric simplicial fat points carry no ambient algebra");
  if (n >= levels_.size()) fail(ErrorKind::LevelOutOfRange, "level " + std::to_string(n) + " beyond truncation");
  return levels_[n];
}

namespace {

// Variables of slot s in the n-th tensor power (n+1 slots).
std::vector<std::size_t> slot_variables(std::size_t slot, std::size_t per_slot) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < per_slot; ++i) out.push_back(slot * per_slot + i);
  return out;
}

}  // namespace

AlgebraMap SimplicialFatPoint::coface(std::size_t n, std::size_t i) const {
  if (tag_ != FunctorTag::Fiber) fail(ErrorKind::Unsupported, "cofaces are only tabulated for the fiber functor");
  if (n == 0 || n >= levels_.size() || i > n) fail(ErrorKind::LevelOutOfRange, "coface index out of range");
  const auto& src = levels_[n - 1]->algebra();
  const auto& dst = levels_[n]->algebra();
  const std::size_t k = base_->algebra().ring().size();
  std::vector<Poly> images;
  for (std::size_t slot = 0; slot < n; ++slot) {
    std::size_t target_slot = slot < i ? slot : slot + 1;
    for (auto v : slot_variables(target_slot, k)) images.push_back(Poly::variable(dst.ring(), v));
  }
  return AlgebraMap(src, dst, std::move(images));
}

AlgebraMap SimplicialFatPoint::codegeneracy(std::size_t n, std::size_t i) const {
  if (tag_ != FunctorTag::Fiber) fail(ErrorKind::Unsupported, "codegeneracies are only tabulated for the fiber functor");
  if (n + 1 >= levels_.size() || i > n) fail(ErrorKind::LevelOutOfRange, "codegeneracy index out of range");
  const auto& src = levels_[n + 1]->algebra();
  const auto& dst = levels_[n]->algebra();
  const std::size_t k = base_->algebra().ring().size();
  std::vector<Poly> images;
  for (std::size_t slot = 0; slot <= n + 1; ++slot) {
    std::size_t target_slot = slot <= i ? slot : slot - 1;
    for (auto v : slot_variables(target_slot, k)) images.push_back(Poly::variable(dst.ring(), v));
  }
  return AlgebraMap(src, dst, std::move(images));
}

PointSystem PointSystem::explicit_chain(std::vector<FatPointPtr> members) {
  PointSystem s;
  s.members_ = std::move(members);
  s.description_ = "explicit";
  return s;
}

PointSystem PointSystem::parametric(Rule rule, std::string description, std::size_t first) {
  PointSystem s;
  s.rule_ = std::move(rule);
  s.description_ = std::move(description);
  s.first_ = first;
  return s;
}

PointSystem PointSystem::jets(const Field& field, const std::string& var) {
  return parametric([field, var](std::size_t n) { return FatPoint::jet(field, static_cast<unsigned>(n), var); },
                    "rule " + var + "^n", 1);
}

std::vector<FatPointPtr> PointSystem::materialize(std::size_t horizon) const {
  if (!rule_) {
    return {members_.begin(), members_.begin() + static_cast<std::ptrdiff_t>(std::min(horizon, members_.size()))};
  }
  std::vector<FatPointPtr> out;
  for (std::size_t i = 0; i < horizon; ++i) out.push_back(std::make_shared<const FatPoint>(rule_(first_ + i)));
  return out;
}

namespace {

PolyRing union_ring(const PolyRing& a, const PolyRing& b) {
  std::vector<std::string> names = a.names();
  for (const auto& n : b.names())
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  return PolyRing(a.field(), names);
}

// First generator of big's ideal outside small's ideal, both embedded in a
// common ring.
std::optional<std::string> first_outside(const FatPoint& small, const FatPoint& big) {
  const auto& si = small.algebra().presentation();
  const auto& bi = big.algebra().presentation();
  if (!(si.field() == bi.field())) fail(ErrorKind::FieldMismatch, "fat points over different fields");
  PolyRing common = union_ring(bi.ring(), si.ring());
  Ideal s = embed_ideal(si, common);
  Ideal b = embed_ideal(bi, common);
  for (const auto& g : b.generators())
    if (!s.contains(g)) return g.to_string();
  return std::nullopt;
}

}  // namespace

bool is_closed_subscheme(const FatPoint& small, const FatPoint& big) { return !first_outside(small, big); }

ChainCheck chain_check(const PointSystem& system, std::size_t horizon) {
  if (horizon < 1) fail(ErrorKind::InvalidArgument, "chain check needs horizon >= 1");
  auto members = system.materialize(horizon);
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    if (auto g = first_outside(*members[i], *members[i + 1])) return {false, i, *g};
  }
  return {};
}

LimitPoint::LimitPoint(PointSystem system, std::size_t horizon) : system_(std::move(system)), horizon_(horizon) {
  auto check = chain_check(system_, horizon_);
  if (!check.ok)
    fail(ErrorKind::ChainFailure,
         "point system fails at " + std::to_string(check.index) + " on generator " + check.generator);
}

}  // namespace motivic
