#include "motivic/sieve.hpp"

#include <algorithm>

namespace motivic {

struct SieveExpr::Node {
  SieveKind kind;
  std::vector<Poly> equations;
  std::optional<Poly> function;
  std::optional<Morphism> morphism;
  std::optional<SieveExpr> left;
  std::optional<SieveExpr> right;
  std::string text;
  std::size_t unions = 0;
  bool image = false;
};

SieveExpr::SieveExpr(SchemePtr ambient, std::shared_ptr<const Node> node)
    : ambient_(std::move(ambient)), node_(std::move(node)) {}

void require_same_ambient(const SchemePtr& a, const SchemePtr& b, const char* what) {
  if (a != b && !a->same_as(*b)) fail(ErrorKind::AmbientMismatch, std::string(what) + ": ambients differ");
}

SieveExpr SieveExpr::full(SchemePtr ambient) {
  auto n = std::make_shared<Node>();
  n->kind = SieveKind::Full;
  n->text = "full";
  return SieveExpr(std::move(ambient), std::move(n));
}

SieveExpr SieveExpr::empty(SchemePtr ambient) {
  auto n = std::make_shared<Node>();
  n->kind = SieveKind::Empty;
  n->text = "empty";
  return SieveExpr(std::move(ambient), std::move(n));
}

SieveExpr SieveExpr::closed(SchemePtr ambient, std::vector<Poly> equations) {
  std::vector<Poly> eqs;
  for (auto& e : equations) {
    require_same_ring(e.ring(), ambient->ring(), "closed sieve");
    if (e.is_zero()) continue;
    if (e.is_constant()) return empty(std::move(ambient));
    eqs.push_back(std::move(e));
  }
  if (eqs.empty()) return full(std::move(ambient));
  auto n = std::make_shared<Node>();
  n->kind = SieveKind::Closed;
  n->text = "V(";
  for (std::size_t i = 0; i < eqs.size(); ++i) n->text += (i ? ", " : "") + eqs[i].to_string();
  n->text += ")";
  n->equations = std::move(eqs);
  return SieveExpr(std::move(ambient), std::move(n));
}

SieveExpr SieveExpr::open(SchemePtr ambient, Poly g) {
  require_same_ring(g.ring(), ambient->ring(), "open sieve");
  if (g.is_zero()) return empty(std::move(ambient));
  if (g.is_constant()) return full(std::move(ambient));
  auto n = std::make_shared<Node>();
  n->kind = SieveKind::Open;
  n->text = "D(" + g.to_string() + ")";
  n->function = std::move(g);
  return SieveExpr(std::move(ambient), std::move(n));
}

SieveExpr SieveExpr::image(Morphism phi) {
  auto n = std::make_shared<Node>();
  n->kind = SieveKind::Image;
  n->text = "im(" + phi.to_string() + ")";
  n->image = true;
  SchemePtr ambient = phi.target();
  n->morphism = std::move(phi);
  return SieveExpr(std::move(ambient), std::move(n));
}

SieveExpr operator|(const SieveExpr& a, const SieveExpr& b) {
  require_same_ambient(a.ambient(), b.ambient(), "union");
  if (a.kind() == SieveKind::Empty || b.kind() == SieveKind::Full) return b;
  if (b.kind() == SieveKind::Empty || a.kind() == SieveKind::Full) return a;
  auto n = std::make_shared<SieveExpr::Node>();
  n->kind = SieveKind::Union;
  n->left = a;
  n->right = b;
  n->text = "(" + a.to_string() + " | " + b.to_string() + ")";
  n->unions = a.union_count() + b.union_count() + 1;
  n->image = a.has_image() || b.has_image();
  return SieveExpr(a.ambient(), std::move(n));
}

SieveExpr operator&(const SieveExpr& a, const SieveExpr& b) {
  require_same_ambient(a.ambient(), b.ambient(), "intersection");
  if (a.kind() == SieveKind::Full || b.kind() == SieveKind::Empty) return b;
  if (b.kind() == SieveKind::Full || a.kind() == SieveKind::Empty) return a;
  auto n = std::make_shared<SieveExpr::Node>();
  n->kind = SieveKind::Intersection;
  n->left = a;
  n->right = b;
  n->text = "(" + a.to_string() + " & " + b.to_string() + ")";
  n->unions = a.union_count() + b.union_count();
  n->image = a.has_image() || b.has_image();
  return SieveExpr(a.ambient(), std::move(n));
}

SieveKind SieveExpr::kind() const { return node_->kind; }

const std::vector<Poly>& SieveExpr::equations() const {
  if (kind() != SieveKind::Closed) fail(ErrorKind::InvalidArgument, "not a closed sieve");
  return node_->equations;
}

const Poly& SieveExpr::function() const {
  if (kind() != SieveKind::Open) fail(ErrorKind::InvalidArgument, "not an open sieve");
  return *node_->function;
}

const Morphism& SieveExpr::morphism() const {
  if (kind() != SieveKind::Image) fail(ErrorKind::InvalidArgument, "not an image sieve");
  return *node_->morphism;
}

const SieveExpr& SieveExpr::left() const {
  if (!node_->left) fail(ErrorKind::InvalidArgument, "not a compound sieve");
  return *node_->left;
}

const SieveExpr& SieveExpr::right() const {
  if (!node_->right) fail(ErrorKind::InvalidArgument, "not a compound sieve");
  return *node_->right;
}

std::size_t SieveExpr::union_count() const { return node_->unions; }
bool SieveExpr::has_image() const { return node_->image; }
std::string SieveExpr::to_string() const { return node_->text; }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::vector<CompiledPoly> compile_all(const std::vector<Poly>& polys, std::uint32_t p) {
  std::vector<CompiledPoly> out;
  for (const auto& f : polys) out.emplace_back(f, p);
  return out;
}

FlatPoint map_flat(const FpAlgebra& alg, const std::vector<CompiledPoly>& images, std::span<const std::uint32_t> flat) {
  const std::size_t d = alg.dimension();
  FlatPoint out(images.size() * d);
  for (std::size_t i = 0; i < images.size(); ++i)
    images[i].evaluate(alg, flat, std::span<std::uint32_t>(out.data() + i * d, d));
  return out;
}

void require_enumerable(const AffineScheme& x, const FatPointPtr& m) {
  if (!x.field().is_finite()) fail(ErrorKind::InfiniteField, "sieve evaluation needs a finite field");
  if (!(x.field() == m->field())) fail(ErrorKind::FieldMismatch, "sieve and fat point over different fields");
}

void collect_forced(const SieveExpr& s, std::vector<Poly>& out) {
  if (s.kind() == SieveKind::Closed) {
    out.insert(out.end(), s.equations().begin(), s.equations().end());
  } else if (s.kind() == SieveKind::Intersection) {
    collect_forced(s.left(), out);
    collect_forced(s.right(), out);
  } else if (s.kind() == SieveKind::Empty) {
    out.push_back(Poly::constant(s.ambient()->ring(), 1));
  }
}

}  // namespace

struct SieveEvaluator::Leaf {
  std::vector<CompiledPoly> polys;
  std::set<FlatPoint> image;
};

SieveEvaluator::SieveEvaluator(const SieveExpr& s, const FatPointPtr& m, const Caps& caps) : sieve_(s) {
  require_enumerable(*s.ambient(), m);
  alg_ = std::make_shared<const FpAlgebra>(m->algebra());
  const std::uint32_t p = alg_->p();
  forced_ = s.ambient()->equations();
  collect_forced(s, forced_);
  std::vector<const SieveExpr*> stack{&sieve_};
  while (!stack.empty()) {
    const SieveExpr* e = stack.back();
    stack.pop_back();
    const void* key = e->id();
    if (leaves_.count(key)) continue;
    switch (e->kind()) {
      case SieveKind::Closed: {
        auto leaf = std::make_shared<Leaf>();
        leaf->polys = compile_all(e->equations(), p);
        leaves_[key] = leaf;
        break;
      }
      case SieveKind::Open: {
        auto leaf = std::make_shared<Leaf>();
        leaf->polys.emplace_back(e->function(), p);
        leaves_[key] = leaf;
        break;
      }
      case SieveKind::Image: {
        auto leaf = std::make_shared<Leaf>();
        const Morphism& phi = e->morphism();
        auto images = compile_all(phi.images(), p);
        PointEnumerator en(*alg_, phi.source()->ring(), phi.source()->equations(), caps.max_candidates);
        en.for_each([&](std::span<const std::uint32_t> flat) {
          leaf->image.insert(map_flat(*alg_, images, flat));
          return true;
        });
        leaves_[key] = leaf;
        break;
      }
      case SieveKind::Union:
      case SieveKind::Intersection:
        stack.push_back(&e->left());
        stack.push_back(&e->right());
        break;
      default:
        break;
    }
  }
}

bool SieveEvaluator::contains(std::span<const std::uint32_t> flat) const { return eval(sieve_, flat); }

bool SieveEvaluator::eval(const SieveExpr& s, std::span<const std::uint32_t> flat) const {
  switch (s.kind()) {
    case SieveKind::Full:
      return true;
    case SieveKind::Empty:
      return false;
    case SieveKind::Closed:
      for (const auto& c : leaves_.at(s.id())->polys)
        if (!c.vanishes(*alg_, flat)) return false;
      return true;
    case SieveKind::Open: {
      std::vector<std::uint32_t> v(alg_->dimension());
      leaves_.at(s.id())->polys[0].evaluate(*alg_, flat, v);
      return v[0] != 0;
    }
    case SieveKind::Image: {
      const auto& img = leaves_.at(s.id())->image;
      return img.count(FlatPoint(flat.begin(), flat.end())) > 0;
    }
    case SieveKind::Union:
      return eval(s.left(), flat) || eval(s.right(), flat);
    case SieveKind::Intersection:
      return eval(s.left(), flat) && eval(s.right(), flat);
  }
  return false;
}

namespace {

bool exact_member(const SchemePoint& p, const SieveExpr& s, const Caps& caps) {
  const auto& alg = p.target->algebra();
  switch (s.kind()) {
    case SieveKind::Full:
      return true;
    case SieveKind::Empty:
      return false;
    case SieveKind::Closed:
      for (const auto& g : s.equations()) {
        Element v = alg.evaluate(g, p.images);
        if (std::any_of(v.begin(), v.end(), [](const Scalar& c) { return c != 0; })) return false;
      }
      return true;
    case SieveKind::Open:
      return alg.is_unit(alg.evaluate(s.function(), p.images));
    case SieveKind::Image: {
      SieveEvaluator ev(s, p.target, caps);
      FlatPoint flat;
      for (const auto& e : p.images) {
        auto r = ev.algebra().from_element(e);
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return ev.contains(flat);
    }
    case SieveKind::Union:
      return exact_member(p, s.left(), caps) || exact_member(p, s.right(), caps);
    case SieveKind::Intersection:
      return exact_member(p, s.left(), caps) && exact_member(p, s.right(), caps);
  }
  return false;
}

}  // namespace

PointMap::PointMap(const Morphism& phi, const FpAlgebra& algebra)
    : alg_(&algebra), images_(compile_all(phi.images(), algebra.p())) {}

FlatPoint PointMap::operator()(std::span<const std::uint32_t> flat) const { return map_flat(*alg_, images_, flat); }

bool member(const SchemePoint& p, const SieveExpr& s, const Caps& caps) {
  if (p.images.size() != s.ambient()->ring().size())
    fail(ErrorKind::VariableMismatch, "point and sieve ambient have different coordinates");
  return exact_member(p, s, caps);
}

std::vector<FlatPoint> flat_points(const SieveExpr& s, const FatPointPtr& m, const Caps& caps) {
  SieveEvaluator ev(s, m, caps);
  std::vector<FlatPoint> out;
  PointEnumerator en(ev.algebra(), s.ambient()->ring(), ev.forced_equations(), caps.max_candidates);
  en.for_each([&](std::span<const std::uint32_t> flat) {
    if (ev.contains(flat)) out.emplace_back(flat.begin(), flat.end());
    return true;
  });
  return out;
}

std::vector<SchemePoint> points(const SieveExpr& s, const FatPointPtr& m, const Caps& caps) {
  FpAlgebra alg(m->algebra());
  const std::size_t d = alg.dimension();
  std::vector<SchemePoint> out;
  for (const auto& flat : flat_points(s, m, caps)) {
    SchemePoint p{m, {}};
    for (std::size_t v = 0; v < s.ambient()->ring().size(); ++v)
      p.images.push_back(alg.to_element(std::span<const std::uint32_t>(flat).subspan(v * d, d)));
    out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t count(const SieveExpr& s, const FatPointPtr& m, const Caps& caps) {
  SieveEvaluator ev(s, m, caps);
  std::uint64_t n = 0;
  PointEnumerator en(ev.algebra(), s.ambient()->ring(), ev.forced_equations(), caps.max_candidates);
  en.for_each([&](std::span<const std::uint32_t> flat) {
    n += ev.contains(flat);
    return true;
  });
  return n;
}

// ---------------------------------------------------------------------------
// Pullbacks, products, sums

SieveExpr pullback(const SchemePtr& new_ambient, std::span<const Poly> images, const SieveExpr& sub) {
  if (images.size() != sub.ambient()->ring().size())
    fail(ErrorKind::VariableMismatch, "pullback needs one image per ambient coordinate");
  for (const auto& img : images) require_same_ring(img.ring(), new_ambient->ring(), "pullback image");
  const PolyRing& ring = new_ambient->ring();
  switch (sub.kind()) {
    case SieveKind::Full:
      return SieveExpr::full(new_ambient);
    case SieveKind::Empty:
      return SieveExpr::empty(new_ambient);
    case SieveKind::Closed: {
      std::vector<Poly> eqs;
      for (const auto& g : sub.equations()) eqs.push_back(g.substitute(images, ring));
      return SieveExpr::closed(new_ambient, std::move(eqs));
    }
    case SieveKind::Open:
      return SieveExpr::open(new_ambient, sub.function().substitute(images, ring));
    case SieveKind::Image: {
      const Morphism& phi = sub.morphism();
      auto fp = product(phi.source(), new_ambient);
      const PolyRing& pr = fp.scheme->ring();
      std::vector<Poly> gens = fp.scheme->equations();
      for (std::size_t i = 0; i < images.size(); ++i)
        gens.push_back(phi.images()[i].substitute(fp.first.images(), pr) -
                       images[i].substitute(fp.second.images(), pr));
      auto scheme = std::make_shared<const AffineScheme>(phi.source()->name() + "*" + new_ambient->name(),
                                                         Ideal(pr, std::move(gens)));
      return SieveExpr::image(Morphism(scheme, new_ambient, fp.second.images()));
    }
    case SieveKind::Union:
      return pullback(new_ambient, images, sub.left()) | pullback(new_ambient, images, sub.right());
    case SieveKind::Intersection:
      return pullback(new_ambient, images, sub.left()) & pullback(new_ambient, images, sub.right());
  }
  return sub;
}

SieveExpr pullback(const Morphism& phi, const SieveExpr& sub) {
  require_same_ambient(phi.target(), sub.ambient(), "pullback");
  std::vector<Poly> images;
  for (const auto& img : phi.images()) images.push_back(img);
  return pullback(phi.source(), images, sub);
}

SieveProduct product(const SieveExpr& a, const SieveExpr& b) {
  auto amb = product(a.ambient(), b.ambient());
  SieveExpr s = pullback(amb.first, a) & pullback(amb.second, b);
  return {std::move(amb), std::move(s)};
}

Coproduct coproduct(const SchemePtr& x, const SchemePtr& y) {
  if (!(x->field() == y->field())) fail(ErrorKind::FieldMismatch, "coproduct over different fields");
  std::vector<std::string> names = x->ring().names();
  auto fresh = [&](std::string c) {
    while (std::find(names.begin(), names.end(), c) != names.end()) c += '\'';
    names.push_back(c);
  };
  for (const auto& n : y->ring().names()) fresh(n);
  fresh("e");
  PolyRing ring(x->field(), names);
  const std::size_t nx = x->ring().size(), ny = y->ring().size();
  Coproduct c;
  c.first = x;
  c.second = y;
  c.selector = nx + ny;
  Poly e = Poly::variable(ring, c.selector);
  Poly one = Poly::constant(ring, 1);
  for (std::size_t i = 0; i < nx; ++i) c.first_coordinates.push_back(Poly::variable(ring, i));
  for (std::size_t j = 0; j < ny; ++j) c.second_coordinates.push_back(Poly::variable(ring, nx + j));
  std::vector<Poly> gens{e * e - e};
  for (const auto& f : x->equations()) gens.push_back((one - e) * f.substitute(c.first_coordinates, ring));
  for (const auto& y_j : c.second_coordinates) gens.push_back((one - e) * y_j);
  for (const auto& g : y->equations()) gens.push_back(e * g.substitute(c.second_coordinates, ring));
  for (const auto& x_i : c.first_coordinates) gens.push_back(e * x_i);
  c.scheme = std::make_shared<const AffineScheme>(x->name() + "+" + y->name(), Ideal(ring, std::move(gens)));
  return c;
}

SieveSum disjoint_union(const SieveExpr& a, const SieveExpr& b) {
  auto c = coproduct(a.ambient(), b.ambient());
  const PolyRing& ring = c.scheme->ring();
  Poly e = Poly::variable(ring, c.selector);
  SieveExpr first = pullback(c.scheme, c.first_coordinates, a) & SieveExpr::closed(c.scheme, {e});
  SieveExpr second =
      pullback(c.scheme, c.second_coordinates, b) & SieveExpr::closed(c.scheme, {e - Poly::constant(ring, 1)});
  return {std::move(c), first | second};
}

// ---------------------------------------------------------------------------
// Admissible opens and continuity

namespace {

void flatten_intersection(const SieveExpr& s, std::vector<SieveExpr>& out) {
  if (s.kind() == SieveKind::Intersection) {
    flatten_intersection(s.left(), out);
    flatten_intersection(s.right(), out);
  } else if (s.kind() != SieveKind::Full) {
    out.push_back(s);
  }
}

bool is_open_union(const SieveExpr& s) {
  if (s.kind() == SieveKind::Open || s.kind() == SieveKind::Full) return true;
  if (s.kind() == SieveKind::Union) return is_open_union(s.left()) && is_open_union(s.right());
  return false;
}

// Splits s into (host factors, remaining factors); nullopt when a host
// factor is missing.
std::optional<std::vector<SieveExpr>> open_part(const SieveExpr& s, const SieveExpr& host) {
  std::vector<SieveExpr> factors, host_factors;
  flatten_intersection(s, factors);
  flatten_intersection(host, host_factors);
  for (const auto& h : host_factors) {
    auto it = std::find_if(factors.begin(), factors.end(),
                           [&](const SieveExpr& f) { return f.to_string() == h.to_string(); });
    if (it == factors.end()) return std::nullopt;
    factors.erase(it);
  }
  return factors;
}

}  // namespace

bool is_admissible_open(const SieveExpr& s, const SieveExpr& host) {
  require_same_ambient(s.ambient(), host.ambient(), "admissible open");
  if (s.kind() == SieveKind::Empty) return true;
  auto rest = open_part(s, host);
  if (!rest) return false;
  return std::all_of(rest->begin(), rest->end(), is_open_union);
}

ContinuityVerdict continuity_probe(const Morphism& phi, const SieveExpr& source_host, const SieveExpr& target_host,
                                   const std::vector<std::pair<FatPointPtr, SieveExpr>>& battery, const Caps& caps) {
  require_same_ambient(phi.source(), source_host.ambient(), "continuity source");
  require_same_ambient(phi.target(), target_host.ambient(), "continuity target");
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& [m, w] = battery[i];
    if (!is_admissible_open(w, target_host))
      return {false, i, "battery entry " + w.to_string() + " is not an admissible open of the target"};
    SieveExpr u = SieveExpr::full(phi.target());
    if (w.kind() != SieveKind::Empty) {
      auto rest = open_part(w, target_host);
      for (const auto& f : *rest) u = u & f;
    } else {
      u = w;
    }
    SieveExpr pulled = source_host & pullback(phi, w);
    SieveExpr candidate = source_host & pullback(phi, u);
    auto a = flat_points(pulled, m, caps);
    auto b = flat_points(candidate, m, caps);
    std::set<FlatPoint> sa(a.begin(), a.end());
    for (const auto& p : b) {
      if (sa.count(p)) continue;
      FpAlgebra alg(m->algebra());
      SchemePoint q{m, {}};
      const std::size_t d = alg.dimension();
      for (std::size_t v = 0; v < phi.source()->ring().size(); ++v)
        q.images.push_back(alg.to_element(std::span<const std::uint32_t>(p).subspan(v * d, d)));
      return {false, i,
              "point " + motivic::to_string(q) + " over " + m->to_string() + " lies in " + candidate.to_string() +
                  " but its image leaves " + target_host.to_string()};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Relative sieves

RelativeSieve::RelativeSieve(SieveExpr s, Morphism j) : sieve(std::move(s)), structure(std::move(j)) {
  require_same_ambient(sieve.ambient(), structure.source(), "relative sieve");
}

RelativeSieve RelativeSieve::unit(const SchemePtr& base) {
  return RelativeSieve(SieveExpr::full(base), Morphism::identity(base));
}

RelativeSieve fiber_product(const RelativeSieve& a, const RelativeSieve& b) {
  if (a.base() != b.base() && !a.base()->same_as(*b.base()))
    fail(ErrorKind::BaseMismatch, "fiber product over different bases");
  auto amb = product(a.sieve.ambient(), b.sieve.ambient());
  const PolyRing& ring = amb.scheme->ring();
  std::vector<Poly> agree;
  for (std::size_t i = 0; i < a.structure.images().size(); ++i)
    agree.push_back(a.structure.images()[i].substitute(amb.first.images(), ring) -
                    b.structure.images()[i].substitute(amb.second.images(), ring));
  SieveExpr s = pullback(amb.first, a.sieve) & pullback(amb.second, b.sieve) &
                SieveExpr::closed(amb.scheme, std::move(agree));
  return RelativeSieve(std::move(s), a.structure.after(amb.first));
}

std::vector<std::uint64_t> fiber_counts(const RelativeSieve& s, const FatPointPtr& m, const Caps& caps) {
  const auto& base = s.base();
  require_enumerable(*base, m);
  FpAlgebra alg(m->algebra());
  std::map<FlatPoint, std::size_t> index;
  PointEnumerator en(alg, base->ring(), base->equations(), caps.max_candidates);
  en.for_each([&](std::span<const std::uint32_t> flat) {
    index.emplace(FlatPoint(flat.begin(), flat.end()), index.size());
    return true;
  });
  std::vector<std::uint64_t> counts(index.size(), 0);
  auto images = compile_all(s.structure.images(), alg.p());
  for (const auto& p : flat_points(s.sieve, m, caps)) {
    auto it = index.find(map_flat(alg, images, p));
    if (it == index.end()) fail(ErrorKind::Incompatible, "structure morphism leaves the base");
    ++counts[it->second];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Simplicial sieves

namespace {

std::vector<Poly> block_vars(const PolyRing& ring, std::size_t block, std::size_t width) {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < width; ++i) out.push_back(Poly::variable(ring, block * width + i));
  return out;
}

Morphism product_morphism(const ProductScheme& src, const ProductScheme& tgt, const Morphism& f, const Morphism& g) {
  const PolyRing& ring = src.scheme->ring();
  std::vector<Poly> images;
  for (const auto& img : f.images()) images.push_back(img.substitute(src.first.images(), ring));
  for (const auto& img : g.images()) images.push_back(img.substitute(src.second.images(), ring));
  return Morphism(src.scheme, tgt.scheme, std::move(images));
}

Morphism coproduct_morphism(const Coproduct& src, const Coproduct& tgt, const Morphism& f, const Morphism& g) {
  const PolyRing& ring = src.scheme->ring();
  Poly e = Poly::variable(ring, src.selector);
  Poly not_e = Poly::constant(ring, 1) - e;
  std::vector<Poly> images;
  for (const auto& img : f.images()) images.push_back(not_e * img.substitute(src.first_coordinates, ring));
  for (const auto& img : g.images()) images.push_back(e * img.substitute(src.second_coordinates, ring));
  images.push_back(e);
  return Morphism(src.scheme, tgt.scheme, std::move(images));
}

}  // namespace

SimplicialSieve SimplicialSieve::constant(const SieveExpr& s, std::size_t top_level) {
  SimplicialSieve out;
  out.ambient = SimplicialScheme::constant(s.ambient(), top_level);
  out.levels.assign(top_level + 1, s);
  out.shape = SimplicialShape::Constant;
  out.generator = s;
  return out;
}

SimplicialSieve SimplicialSieve::fiber(const SieveExpr& s, std::size_t top_level) {
  const SchemePtr& x = s.ambient();
  const std::size_t w = x->ring().size();
  SimplicialSieve out;
  out.shape = SimplicialShape::Fiber;
  out.generator = s;
  std::vector<SchemePtr> powers{x};
  for (std::size_t n = 1; n <= top_level; ++n) powers.push_back(product(powers.back(), x).scheme);
  out.ambient.levels = powers;
  out.ambient.faces.resize(top_level + 1);
  out.ambient.degeneracies.resize(top_level + 1);
  for (std::size_t n = 0; n <= top_level; ++n) {
    const PolyRing& ring = powers[n]->ring();
    SieveExpr level = SieveExpr::full(powers[n]);
    for (std::size_t k = 0; k <= n; ++k) level = level & pullback(powers[n], block_vars(ring, k, w), s);
    out.levels.push_back(level);
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i) {
        std::vector<Poly> images;
        for (std::size_t k = 0; k <= n; ++k)
          if (k != i)
            for (auto& v : block_vars(ring, k, w)) images.push_back(std::move(v));
        out.ambient.faces[n].emplace_back(powers[n], powers[n - 1], std::move(images));
      }
    if (n < top_level)
      for (std::size_t i = 0; i <= n; ++i) {
        std::vector<Poly> images;
        for (std::size_t k = 0; k <= n + 1; ++k)
          for (auto& v : block_vars(ring, k <= i ? k : k - 1, w)) images.push_back(std::move(v));
        out.ambient.degeneracies[n].emplace_back(powers[n], powers[n + 1], std::move(images));
      }
  }
  return out;
}

SimplicialSieve SimplicialSieve::symmetric_power(const SieveExpr& s, std::size_t top_level) {
  SimplicialSieve out = fiber(s, top_level);
  out.symmetric = true;
  return out;
}

SimplicialSieve SimplicialSieve::functor(FunctorTag tag, const SieveExpr& s, std::size_t top_level) {
  switch (tag) {
    case FunctorTag::Trivial:
      return constant(s, top_level);
    case FunctorTag::Fiber:
      return fiber(s, top_level);
    case FunctorTag::Symmetric:
      return symmetric_power(s, top_level);
  }
  return constant(s, top_level);
}

SimplicialSieve SimplicialSieve::general(SimplicialScheme ambient, std::vector<SieveExpr> levels) {
  if (levels.empty() || levels.size() != ambient.levels.size())
    fail(ErrorKind::InvalidArgument, "simplicial sieve needs one sieve per ambient level");
  for (std::size_t n = 0; n < levels.size(); ++n)
    require_same_ambient(levels[n].ambient(), ambient.levels[n], "simplicial sieve level");
  SimplicialSieve out;
  out.ambient = std::move(ambient);
  out.levels = std::move(levels);
  return out;
}

const SieveExpr& SimplicialSieve::level(std::size_t n) const {
  if (n >= levels.size())
    fail(ErrorKind::LevelOutOfRange, "level " + std::to_string(n) + " above the skeletal level " +
                                         std::to_string(top_level()));
  return levels[n];
}

std::size_t SimplicialSieve::blocks(std::size_t n) const { return shape == SimplicialShape::Constant ? 1 : n + 1; }

namespace {

void require_compatible(const SimplicialSieve& a, const SimplicialSieve& b, const char* what) {
  if (a.levels.size() != b.levels.size()) fail(ErrorKind::LevelOutOfRange, std::string(what) + ": skeletal levels differ");
  if (a.symmetric != b.symmetric) fail(ErrorKind::Incompatible, std::string(what) + ": symmetric and plain sieves");
}

SimplicialSieve lattice(const SimplicialSieve& a, const SimplicialSieve& b, bool is_union) {
  require_compatible(a, b, is_union ? "union" : "intersection");
  SimplicialSieve out;
  out.ambient = a.ambient;
  out.symmetric = a.symmetric;
  for (std::size_t n = 0; n < a.levels.size(); ++n) {
    require_same_ambient(a.levels[n].ambient(), b.levels[n].ambient(), "simplicial lattice operation");
    out.levels.push_back(is_union ? (a.levels[n] | b.levels[n]) : (a.levels[n] & b.levels[n]));
  }
  if (a.shape == SimplicialShape::Constant && b.shape == SimplicialShape::Constant) {
    out.shape = SimplicialShape::Constant;
    out.generator = out.levels[0];
  }
  return out;
}

}  // namespace

SimplicialSieve operator|(const SimplicialSieve& a, const SimplicialSieve& b) { return lattice(a, b, true); }
SimplicialSieve operator&(const SimplicialSieve& a, const SimplicialSieve& b) { return lattice(a, b, false); }

SimplicialSieve product(const SimplicialSieve& a, const SimplicialSieve& b) {
  require_compatible(a, b, "product");
  if (a.symmetric) fail(ErrorKind::Unsupported, "products of symmetric sieves are set-level only");
  const std::size_t top = a.top_level();
  if (a.shape == SimplicialShape::Constant && b.shape == SimplicialShape::Constant)
    return SimplicialSieve::constant(product(a.levels[0], b.levels[0]).sieve, top);
  std::vector<ProductScheme> amb;
  SimplicialSieve out;
  for (std::size_t n = 0; n <= top; ++n) {
    auto p = product(a.levels[n], b.levels[n]);
    amb.push_back(p.ambient);
    out.ambient.levels.push_back(p.ambient.scheme);
    out.levels.push_back(p.sieve);
  }
  out.ambient.faces.resize(top + 1);
  out.ambient.degeneracies.resize(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i)
        out.ambient.faces[n].push_back(
            product_morphism(amb[n], amb[n - 1], a.ambient.faces[n][i], b.ambient.faces[n][i]));
    if (n < top)
      for (std::size_t i = 0; i <= n; ++i)
        out.ambient.degeneracies[n].push_back(
            product_morphism(amb[n], amb[n + 1], a.ambient.degeneracies[n][i], b.ambient.degeneracies[n][i]));
  }
  return out;
}

SimplicialSieve disjoint_union(const SimplicialSieve& a, const SimplicialSieve& b) {
  require_compatible(a, b, "disjoint union");
  if (a.symmetric) fail(ErrorKind::Unsupported, "sums of symmetric sieves are set-level only");
  const std::size_t top = a.top_level();
  if (a.shape == SimplicialShape::Constant && b.shape == SimplicialShape::Constant)
    return SimplicialSieve::constant(disjoint_union(a.levels[0], b.levels[0]).sieve, top);
  std::vector<Coproduct> amb;
  SimplicialSieve out;
  for (std::size_t n = 0; n <= top; ++n) {
    auto s = disjoint_union(a.levels[n], b.levels[n]);
    amb.push_back(s.ambient);
    out.ambient.levels.push_back(s.ambient.scheme);
    out.levels.push_back(s.sieve);
  }
  out.ambient.faces.resize(top + 1);
  out.ambient.degeneracies.resize(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i)
        out.ambient.faces[n].push_back(
            coproduct_morphism(amb[n], amb[n - 1], a.ambient.faces[n][i], b.ambient.faces[n][i]));
    if (n < top)
      for (std::size_t i = 0; i <= n; ++i)
        out.ambient.degeneracies[n].push_back(
            coproduct_morphism(amb[n], amb[n + 1], a.ambient.degeneracies[n][i], b.ambient.degeneracies[n][i]));
  }
  return out;
}

std::uint64_t level_count(const SimplicialSieve& s, const FatPointPtr& m, std::size_t n, const Caps& caps) {
  const SieveExpr& level = s.level(n);
  if (!s.symmetric) return count(level, m, caps);
  const std::size_t blocks = n + 1;
  const std::size_t width = level.ambient()->ring().size() / blocks * m->length();
  std::set<std::vector<FlatPoint>> orbits;
  for (const auto& p : flat_points(level, m, caps)) {
    std::vector<FlatPoint> parts;
    for (std::size_t k = 0; k < blocks; ++k)
      parts.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(k * width),
                         p.begin() + static_cast<std::ptrdiff_t>((k + 1) * width));
    std::sort(parts.begin(), parts.end());
    orbits.insert(std::move(parts));
  }
  return orbits.size();
}

std::optional<std::string> check_structure(const SimplicialSieve& s, const FatPointPtr& m, const Caps& caps) {
  if (s.symmetric) fail(ErrorKind::Unsupported, "symmetric sieves carry no face maps");
  const std::size_t top = s.top_level();
  std::vector<std::vector<FlatPoint>> pts;
  std::vector<std::unique_ptr<SieveEvaluator>> evs;
  for (std::size_t n = 0; n <= top; ++n) {
    pts.push_back(flat_points(s.levels[n], m, caps));
    evs.push_back(std::make_unique<SieveEvaluator>(s.levels[n], m, caps));
  }
  const FpAlgebra& alg = evs[0]->algebra();
  auto check = [&](const Morphism& f, std::size_t from, std::size_t to, const std::string& what)
      -> std::optional<std::string> {
    auto images = compile_all(f.images(), alg.p());
    for (const auto& p : pts[from])
      if (!evs[to]->contains(map_flat(alg, images, p)))
        return what + " sends a member of level " + std::to_string(from) + " outside level " + std::to_string(to);
    return std::nullopt;
  };
  for (std::size_t n = 1; n <= top; ++n)
    for (std::size_t i = 0; i <= n; ++i)
      if (auto r = check(s.ambient.faces[n][i], n, n - 1, "d_" + std::to_string(i))) return r;
  for (std::size_t n = 0; n < top; ++n)
    for (std::size_t i = 0; i <= n; ++i)
      if (auto r = check(s.ambient.degeneracies[n][i], n, n + 1, "s_" + std::to_string(i))) return r;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Arcs and limit sieves

SieveExpr arc_sieve(const SieveExpr& s, const ArcScheme& arc, const Caps& caps) {
  require_same_ambient(s.ambient(), arc.source, "arc sieve");
  switch (s.kind()) {
    case SieveKind::Full:
      return SieveExpr::full(arc.scheme);
    case SieveKind::Empty:
      return SieveExpr::empty(arc.scheme);
    case SieveKind::Closed: {
      std::vector<Poly> eqs;
      for (const auto& g : s.equations())
        for (auto& c : weil_expand(g, arc)) eqs.push_back(std::move(c));
      return SieveExpr::closed(arc.scheme, std::move(eqs));
    }
    case SieveKind::Open:
      return SieveExpr::open(arc.scheme, weil_expand(s.function(), arc)[0]);
    case SieveKind::Image: {
      const Morphism& phi = s.morphism();
      auto source_arc = weil_restrict(phi.source(), arc.point, caps);
      return SieveExpr::image(arc_of_morphism(phi, source_arc, arc));
    }
    case SieveKind::Union:
      return arc_sieve(s.left(), arc, caps) | arc_sieve(s.right(), arc, caps);
    case SieveKind::Intersection:
      return arc_sieve(s.left(), arc, caps) & arc_sieve(s.right(), arc, caps);
  }
  return s;
}

LimitSieve::LimitSieve(SieveExpr base, PointSystem system, Rule rule, std::string description)
    : base_(std::move(base)), system_(std::move(system)), rule_(std::move(rule)), description_(std::move(description)) {}

LimitSieve LimitSieve::full_arcs(const SieveExpr& base, PointSystem system) {
  return LimitSieve(
      base, std::move(system), [base](std::size_t, const ArcScheme& arc) { return arc_sieve(base, arc); }, "arcs");
}

LimitSieve LimitSieve::cylinder(const SieveExpr& base, PointSystem system, SieveExpr a) {
  auto first = system.materialize(1);
  if (first.empty()) fail(ErrorKind::InvalidArgument, "cylinder over an empty point system");
  auto first_arc = weil_restrict(base.ambient(), first[0]);
  require_same_ambient(a.ambient(), first_arc.scheme, "cylinder condition");
  return LimitSieve(
      base, std::move(system),
      [base, a, first_arc](std::size_t, const ArcScheme& arc) {
        return arc_sieve(base, arc) & pullback(truncation_map(arc, first_arc), a);
      },
      "cylinder " + a.to_string());
}

std::vector<LimitSieve::Member> LimitSieve::materialize(std::size_t horizon, const std::vector<FatPointPtr>& battery,
                                                        const Caps& caps) const {
  auto chain = chain_check(system_, horizon);
  if (!chain.ok)
    fail(ErrorKind::ChainFailure,
         "point system fails at " + std::to_string(chain.index) + " on generator " + chain.generator);
  std::vector<Member> out;
  for (const auto& m : system_.materialize(horizon)) {
    auto arc = weil_restrict(base_.ambient(), m, caps);
    SieveExpr s = rule_(out.size(), arc);
    require_same_ambient(s.ambient(), arc.scheme, "limit sieve member");
    out.push_back({m, std::move(arc), std::move(s)});
  }
  if (!base_.ambient()->field().is_finite()) return out;
  Caps probe = caps;
  probe.max_candidates = std::min<std::uint64_t>(caps.max_candidates, 1u << 16);
  for (const auto& a : battery) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      try {
        SieveEvaluator whole(arc_sieve(base_, out[i].arc, caps), a, probe);
        for (const auto& p : flat_points(out[i].sieve, a, probe))
          if (!whole.contains(p))
            fail(ErrorKind::Incompatible, "member at position " + std::to_string(i) + " leaves the arcs of the base over " +
                                              a->to_string());
        if (i + 1 < out.size()) {
          Morphism t = truncation_map(out[i + 1].arc, out[i].arc);
          SieveEvaluator lower(out[i].sieve, a, probe);
          auto images = compile_all(t.images(), lower.algebra().p());
          for (const auto& p : flat_points(out[i + 1].sieve, a, probe))
            if (!lower.contains(map_flat(lower.algebra(), images, p)))
              fail(ErrorKind::Incompatible, "truncation of member " + std::to_string(i + 1) + " leaves member " +
                                                std::to_string(i) + " over " + a->to_string());
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CapExceeded) throw;
      }
    }
  }
  return out;
}

}  // namespace motivic
