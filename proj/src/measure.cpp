#include "motivic/measure.hpp"

namespace motivic {

const char* to_string(MeasureMode mode) {
  switch (mode) {
    case MeasureMode::Finite: return "finite";
    case MeasureMode::Limit: return "limit";
    case MeasureMode::Lax: return "lax";
    case MeasureMode::Relative: return "relative";
    case MeasureMode::Indexed: return "indexed";
  }
  return "?";
}

std::string MeasureReport::verdict() const {
  if (stabilized) return "stabilized(" + value.to_string() + ", since " + std::to_string(since) + ")";
  return "indeterminate(" + std::to_string(horizon) + ")";
}

KClass finite_measure(const SieveExpr& s, const FatPointPtr& m, const Caps& caps) {
  auto arc = weil_restrict(s.ambient(), m, caps);
  return KClass::of(arc_sieve(s, arc, caps));
}

KClass finite_measure(const SchemePtr& x, const FatPointPtr& m, const Caps& caps) {
  return finite_measure(SieveExpr::full(x), m, caps);
}

long ceil_product(const Scalar& q, std::size_t d) {
  if (q < 0) fail(ErrorKind::InvalidArgument, "Q must be nonnegative");
  Scalar v = q * Scalar(static_cast<unsigned long>(d));
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return c.get_si();
}

KClass integral_form(const SieveExpr& s, const SchemePtr& x, const FatPointPtr& m, const Caps& caps) {
  auto k = std::make_shared<const FatPoint>(FatPoint::spec_k(m->field()));
  KClass first = finite_measure(s, k, caps);
  KClass second = finite_measure(x, m, caps) * KClass::lefschetz(-ceil_product(1, arc_dimension(x, m, caps)));
  return first * second;
}

namespace {

struct Validated {
  std::size_t horizon;
  std::size_t window;
};

Validated validate(const MeasureQuery& q) {
  if (q.q < 0) fail(ErrorKind::InvalidArgument, "Q must be nonnegative");
  if (q.window < 2) fail(ErrorKind::InvalidArgument, "stability window must be at least 2");
  if (q.horizon < q.window) fail(ErrorKind::InvalidArgument, "horizon must be at least the window");
  return {q.horizon, q.window};
}

// Structure map from the arc space at m down to the arcs of S over Spec k.
Morphism relative_structure(const Morphism& phi, const ArcScheme& arc, const ArcScheme& base_arc, const Caps& caps) {
  auto s_arc = weil_restrict(phi.target(), arc.point, caps);
  Morphism up = arc_of_morphism(phi, arc, s_arc);
  return truncation_map(s_arc, base_arc).after(up);
}

MeasureReport run(const MeasureQuery& q, MeasureMode mode) {
  auto [horizon, window] = validate(q);
  if (q.structure) require_same_ambient(q.structure->source(), q.subject.base().ambient(), "relative measure");
  MeasureReport report;
  report.mode = mode;
  report.horizon = horizon;
  report.lax = q.lax_description;
  auto members = q.subject.materialize(horizon, q.battery, q.caps);
  const SchemePtr& x = q.subject.base().ambient();
  std::optional<ArcScheme> base_arc;
  if (q.structure) {
    auto k = std::make_shared<const FatPoint>(FatPoint::spec_k(x->field()));
    base_arc = weil_restrict(q.structure->target(), k, q.caps);
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& mem = members[i];
    MeasureTerm term;
    term.point = mem.point;
    term.label = q.subject.system().label(i);
    const std::size_t dim = krull_dimension(mem.arc.scheme->presentation()).dimension;
    term.exponent = -ceil_product(q.q, dim) - (q.lax ? q.lax(term.label) : 0);
    if (base_arc) {
      term.member = KClass::of(RelativeSieve(mem.sieve, relative_structure(*q.structure, mem.arc, *base_arc, q.caps)));
      term.value = term.member * KClass::lefschetz(term.exponent, base_arc->scheme);
    } else {
      term.member = KClass::of(mem.sieve);
      term.value = term.member * KClass::lefschetz(term.exponent);
    }
    report.sequence.push_back(std::move(term));
  }
  const auto& seq = report.sequence;
  if (seq.empty()) return report;
  // a finite directed system has a maximum: the principal ultrafilter sits there
  const bool finite_system = !q.subject.system().is_parametric() && seq.size() == q.subject.system().explicit_size();
  std::size_t since = seq.size() - 1;
  while (since > 0 && seq[since - 1].value == seq.back().value) --since;
  if (finite_system || seq.size() - since >= window) {
    report.stabilized = true;
    report.value = seq.back().value;
    report.since = since;
  }
  return report;
}

}  // namespace

MeasureReport limit_measure(const MeasureQuery& q) {
  return run(q, q.structure ? MeasureMode::Relative : (q.lax ? MeasureMode::Lax : MeasureMode::Limit));
}

MeasureReport lax_measure(const MeasureQuery& q) {
  if (!q.lax) fail(ErrorKind::InvalidArgument, "lax measure needs a rule l(m)");
  return run(q, MeasureMode::Lax);
}

MeasureReport stable_set_measure(const LimitSieve& family, std::size_t horizon, std::size_t window,
                                 const std::vector<FatPointPtr>& battery, const Caps& caps) {
  MeasureQuery q(family);
  q.q = 1;
  q.horizon = horizon;
  q.window = window;
  q.battery = battery;
  q.caps = caps;
  return run(q, MeasureMode::Limit);
}

MeasureReport indexed_mode(const MeasureQuery& q) { return run(q, MeasureMode::Indexed); }

std::vector<MeasureReport> indexed_levels(const std::vector<MeasureQuery>& levels) {
  std::vector<MeasureReport> out;
  for (const auto& q : levels) out.push_back(run(q, MeasureMode::Indexed));
  return out;
}

}  // namespace motivic
