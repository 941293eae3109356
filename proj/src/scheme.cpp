#include "motivic/scheme.hpp"

#include <algorithm>

namespace motivic {

AffineScheme::AffineScheme(std::string name, Ideal presentation)
    : name_(std::move(name)), presentation_(std::move(presentation)) {}

AffineScheme AffineScheme::make(std::string name, Ideal presentation, const Caps& caps) {
  if (presentation.ring().size() > caps.max_variables)
    fail(ErrorKind::CapExceeded, "scheme '" + name + "' exceeds the variable cap");
  for (const auto& g : presentation.generators())
    if (g.degree() > caps.max_degree)
      fail(ErrorKind::CapExceeded, "scheme '" + name + "' has a generator above the degree cap");
  return AffineScheme(std::move(name), std::move(presentation));
}

AffineScheme AffineScheme::affine_space(const Field& field, std::vector<std::string> names, std::string name) {
  return AffineScheme(std::move(name), Ideal(PolyRing(field, std::move(names))));
}

AffineScheme AffineScheme::spec_k(const Field& field) { return affine_space(field, {}, "Spec k"); }

std::string AffineScheme::to_string() const {
  std::string s = "Spec k[";
  for (std::size_t i = 0; i < ring().size(); ++i) s += (i ? "," : "") + ring().names()[i];
  s += "]";
  const auto& eqs = equations();
  if (eqs.empty()) return s;
  s += "/(";
  for (std::size_t i = 0; i < eqs.size(); ++i) s += (i ? ", " : "") + eqs[i].to_string();
  return s + ")";
}

bool AffineScheme::same_as(const AffineScheme& other) const {
  return ring() == other.ring() && presentation_.basis() == other.presentation_.basis();
}

Morphism::Morphism(SchemePtr source, SchemePtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != target_->ring().size())
    fail(ErrorKind::VariableMismatch, "morphism needs one image per target coordinate");
  for (const auto& img : images_) require_same_ring(img.ring(), source_->ring(), "morphism image");
  for (const auto& g : target_->equations()) {
    if (!source_->presentation().contains(pull(g)))
      fail(ErrorKind::InvalidArgument,
           "morphism does not map " + source_->name() + " into " + target_->name() + " (relation " + g.to_string() + ")");
  }
}

Morphism Morphism::identity(const SchemePtr& x) {
  std::vector<Poly> images;
  for (std::size_t i = 0; i < x->ring().size(); ++i) images.push_back(Poly::variable(x->ring(), i));
  return Morphism(x, x, std::move(images));
}

Poly Morphism::pull(const Poly& f) const {
  require_same_ring(f.ring(), target_->ring(), "pullback of function");
  return f.substitute(images_, source_->ring());
}

Morphism Morphism::after(const Morphism& first) const {
  if (!first.target_->same_as(*source_)) fail(ErrorKind::AmbientMismatch, "composition of incompatible morphisms");
  std::vector<Poly> images;
  for (const auto& img : images_) images.push_back(first.pull(img.rename_into(first.target_->ring())));
  return Morphism(first.source_, target_, std::move(images));
}

std::string Morphism::to_string() const {
  std::string s = source_->name() + " -> " + target_->name() + " : (";
  for (std::size_t i = 0; i < images_.size(); ++i) s += (i ? ", " : "") + images_[i].to_string();
  return s + ")";
}

ProductScheme product(const SchemePtr& x, const SchemePtr& y) {
  if (!(x->field() == y->field())) fail(ErrorKind::FieldMismatch, "product over different fields");
  std::vector<std::string> names = x->ring().names();
  std::vector<std::string> y_names;
  for (const auto& n : y->ring().names()) {
    std::string c = n;
    while (std::find(names.begin(), names.end(), c) != names.end()) c += '\'';
    names.push_back(c);
    y_names.push_back(c);
  }
  PolyRing ring(x->field(), names);
  const std::size_t nx = x->ring().size();
  std::vector<Poly> x_vars, y_vars;
  for (std::size_t i = 0; i < nx; ++i) x_vars.push_back(Poly::variable(ring, i));
  for (std::size_t i = 0; i < y->ring().size(); ++i) y_vars.push_back(Poly::variable(ring, nx + i));
  std::vector<Poly> gens;
  for (const auto& g : x->equations()) gens.push_back(g.substitute(x_vars, ring));
  for (const auto& g : y->equations()) gens.push_back(g.substitute(y_vars, ring));
  auto scheme = std::make_shared<const AffineScheme>(x->name() + "*" + y->name(), Ideal(ring, std::move(gens)));
  return {scheme, Morphism(scheme, x, x_vars), Morphism(scheme, y, y_vars)};
}

SimplicialScheme SimplicialScheme::constant(const SchemePtr& x, std::size_t top_level) {
  SimplicialScheme s;
  for (std::size_t n = 0; n <= top_level; ++n) {
    s.levels.push_back(x);
    s.faces.emplace_back();
    s.degeneracies.emplace_back();
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i) s.faces[n].push_back(Morphism::identity(x));
    if (n < top_level)
      for (std::size_t i = 0; i <= n; ++i) s.degeneracies[n].push_back(Morphism::identity(x));
  }
  return s;
}

bool SimplicialScheme::is_constant() const {
  auto is_id = [](const Morphism& m) {
    if (!m.source()->same_as(*m.target())) return false;
    for (std::size_t i = 0; i < m.images().size(); ++i)
      if (!(m.images()[i] == Poly::variable(m.source()->ring(), i))) return false;
    return true;
  };
  for (std::size_t n = 1; n < levels.size(); ++n)
    if (!levels[n]->same_as(*levels[0])) return false;
  for (const auto& fs : faces)
    for (const auto& f : fs)
      if (!is_id(f)) return false;
  for (const auto& ds : degeneracies)
    for (const auto& d : ds)
      if (!is_id(d)) return false;
  return true;
}

PointEnumerator::PointEnumerator(const FpAlgebra& algebra, const PolyRing& ring, const std::vector<Poly>& equations,
                                 std::uint64_t max_nodes)
    : alg_(algebra), nvars_(ring.size()), checks_(ring.size()), pinned_(ring.size()), max_nodes_(max_nodes) {
  for (const auto& eq : equations) {
    require_same_ring(eq.ring(), ring, "enumeration");
    CompiledPoly c(eq, alg_.p());
    if (c.last_variable() < 0) constants_.push_back(std::move(c));
    else checks_[static_cast<std::size_t>(c.last_variable())].push_back(std::move(c));
  }
  current_.assign(nvars_ * alg_.dimension(), 0);
}

void PointEnumerator::pin(std::size_t var, std::span<const std::uint32_t> value) {
  pinned_.at(var).assign(value.begin(), value.end());
}

void PointEnumerator::for_each(const std::function<bool(std::span<const std::uint32_t>)>& visit) {
  for (const auto& c : constants_)
    if (!c.vanishes(alg_, current_)) return;
  if (nvars_ > 0 && alg_.cardinality() == 0) fail(ErrorKind::CapExceeded, "algebra too large to enumerate");
  descend(0, visit);
}

bool PointEnumerator::descend(std::size_t var, const std::function<bool(std::span<const std::uint32_t>)>& visit) {
  if (var == nvars_) return visit(current_);
  const std::size_t d = alg_.dimension();
  std::span<std::uint32_t> slot(current_.data() + var * d, d);
  const bool pinned = !pinned_[var].empty();
  const std::uint64_t choices = pinned ? 1 : alg_.cardinality();
  for (std::uint64_t idx = 0; idx < choices; ++idx) {
    if (++nodes_ > max_nodes_) fail(ErrorKind::CapExceeded, "enumeration exceeded the candidate cap");
    if (pinned) std::copy(pinned_[var].begin(), pinned_[var].end(), slot.begin());
    else alg_.decode(idx, slot);
    bool ok = true;
    for (const auto& c : checks_[var])
      if (!c.vanishes(alg_, current_)) {
        ok = false;
        break;
      }
    if (ok && !descend(var + 1, visit)) return false;
  }
  return true;
}

std::uint64_t PointEnumerator::count() {
  std::uint64_t n = 0;
  for_each([&](std::span<const std::uint32_t>) {
    ++n;
    return true;
  });
  return n;
}

std::vector<SchemePoint> points(const AffineScheme& x, const FatPointPtr& m, const Caps& caps) {
  if (!x.field().is_finite()) fail(ErrorKind::InfiniteField, "point enumeration needs a finite field");
  if (!(x.field() == m->field())) fail(ErrorKind::FieldMismatch, "scheme and fat point over different fields");
  FpAlgebra alg(m->algebra());
  PointEnumerator en(alg, x.ring(), x.equations(), caps.max_candidates);
  std::vector<SchemePoint> out;
  const std::size_t d = alg.dimension();
  en.for_each([&](std::span<const std::uint32_t> flat) {
    SchemePoint p{m, {}};
    for (std::size_t v = 0; v < x.ring().size(); ++v) p.images.push_back(alg.to_element(flat.subspan(v * d, d)));
    out.push_back(std::move(p));
    return true;
  });
  return out;
}

SchemePoint apply(const Morphism& phi, const SchemePoint& p) {
  SchemePoint q{p.target, {}};
  for (const auto& img : phi.images()) q.images.push_back(p.target->algebra().evaluate(img, p.images));
  return q;
}

bool lies_on(const SchemePoint& p, const AffineScheme& x) {
  for (const auto& g : x.equations()) {
    Element v = p.target->algebra().evaluate(g, p.images);
    if (std::any_of(v.begin(), v.end(), [](const Scalar& s) { return s != 0; })) return false;
  }
  return true;
}

std::string to_string(const SchemePoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.images.size(); ++i)
    s += (i ? ", " : "") + p.target->algebra().to_poly(p.images[i]).to_string();
  return s + ")";
}

}  // namespace motivic
