#include "motivic/kring.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace motivic {

namespace {

// ---------------------------------------------------------------------------
// Factor registry

enum class FactorKind { Block, Sym };

struct FactorData {
  FactorKind kind = FactorKind::Block;
  std::string key;
  SchemePtr base;                       // relative factors only
  SchemePtr ambient;                    // Block
  std::optional<SieveExpr> sieve;       // Block
  std::optional<Morphism> structure;    // relative Block
  unsigned power = 0;                   // Sym
  std::shared_ptr<const KClass> inner;  // Sym
};

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const FactorData>> factors;
  std::map<std::pair<std::string, std::string>, CountVector> counts;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::shared_ptr<const FactorData> find_factor(const std::string& key) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.factors.find(key);
  if (it == r.factors.end()) fail(ErrorKind::InvalidArgument, "unknown class factor " + key);
  return it->second;
}

void register_factor(std::shared_ptr<const FactorData> f) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factors.emplace(f->key, std::move(f));
}

bool same_base(const SchemePtr& a, const SchemePtr& b) {
  if (!a || !b) return !a && !b;
  return a == b || a->same_as(*b);
}

// ---------------------------------------------------------------------------
// Canonical blocks

// A conjunction of closed and open conditions. Unmarked coordinates come
// first; the last `marked` coordinates are base coordinates b0.. .
struct Conj {
  PolyRing ring;
  std::size_t marked = 0;
  SchemePtr base;
  std::vector<Poly> eqs;
  std::vector<Poly> opens;
};

std::vector<std::string> conj_names(std::size_t unmarked, std::size_t marked, const char* prefix) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < unmarked; ++i) names.push_back(prefix + std::to_string(i));
  for (std::size_t i = 0; i < marked; ++i) names.push_back("b" + std::to_string(i));
  return names;
}

std::vector<Poly> sorted_unique(std::vector<Poly> polys) {
  std::sort(polys.begin(), polys.end(), [](const Poly& a, const Poly& b) { return a.to_string() < b.to_string(); });
  polys.erase(std::unique(polys.begin(), polys.end()), polys.end());
  return polys;
}

// Normalizes opens against a basis; nullopt if some open is empty.
std::optional<std::vector<Poly>> reduce_opens(const std::vector<Poly>& opens, const std::vector<Poly>& basis) {
  std::vector<Poly> out;
  for (const auto& g : opens) {
    Poly r = reduce(g, basis);
    if (r.is_zero()) return std::nullopt;
    if (r.is_constant()) continue;
    out.push_back(r.monic());
  }
  return sorted_unique(std::move(out));
}

std::string block_text(const std::vector<Poly>& eqs, const std::vector<Poly>& opens) {
  std::vector<std::string> parts;
  if (!eqs.empty()) {
    std::vector<std::string> e;
    for (const auto& g : eqs) e.push_back(g.to_string());
    std::sort(e.begin(), e.end());
    std::string s = "V(";
    for (std::size_t i = 0; i < e.size(); ++i) s += (i ? ", " : "") + e[i];
    parts.push_back(s + ")");
  }
  for (const auto& g : opens) parts.push_back("D(" + g.to_string() + ")");
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " & " : "") + parts[i];
  return s;
}

struct Component {
  std::vector<std::size_t> unmarked;  // variable indices in the conj ring
  bool relative = false;
  std::vector<Poly> eqs;
  std::vector<Poly> opens;
};

// Renames a component into canonical coordinates, trying every ordering of
// up to four unmarked variables and keeping the smallest text.
std::shared_ptr<const FactorData> canonical_factor(const Conj& c, const Component& comp) {
  const std::size_t u = comp.unmarked.size();
  const std::size_t k = comp.relative ? c.marked : 0;
  PolyRing ring(c.ring.field(), conj_names(u, k, "v"));
  std::vector<std::size_t> order(u);
  std::iota(order.begin(), order.end(), 0);
  std::optional<std::string> best;
  std::vector<Poly> best_eqs, best_opens;
  const std::size_t nu = c.ring.size() - c.marked;
  do {
    std::vector<Poly> images(c.ring.size(), Poly(ring));
    for (std::size_t i = 0; i < u; ++i) images[comp.unmarked[order[i]]] = Poly::variable(ring, i);
    for (std::size_t i = 0; i < k; ++i) images[nu + i] = Poly::variable(ring, u + i);
    std::vector<Poly> eqs;
    for (const auto& g : comp.eqs) eqs.push_back(g.substitute(images, ring));
    eqs = reduced_groebner_basis(ring, std::move(eqs));
    std::vector<Poly> opens;
    for (const auto& g : comp.opens) opens.push_back(g.substitute(images, ring));
    auto reduced = reduce_opens(opens, eqs);
    if (!reduced) fail(ErrorKind::InvalidArgument, "empty component after renaming");
    std::string text = block_text(eqs, *reduced);
    if (!best || text < *best) {
      best = text;
      best_eqs = eqs;
      best_opens = *reduced;
    }
  } while (u <= 4 && std::next_permutation(order.begin(), order.end()));
  auto f = std::make_shared<FactorData>();
  f->key = *best + " over " + c.ring.field().to_string();
  f->ambient = std::make_shared<const AffineScheme>("F", Ideal(ring, best_eqs));
  SieveExpr s = SieveExpr::full(f->ambient);
  for (const auto& g : best_opens) s = s & SieveExpr::open(f->ambient, g);
  f->sieve = s;
  if (comp.relative) {
    f->base = c.base;
    std::vector<Poly> proj;
    for (std::size_t i = 0; i < k; ++i) proj.push_back(Poly::variable(ring, u + i));
    f->structure = Morphism(f->ambient, c.base, std::move(proj));
  }
  return f;
}

// Substitutes away unmarked variables that occur linearly with a constant
// coefficient in some basis element, as long as possible.
void eliminate_linear(const Conj& c, std::vector<Poly>& basis, std::vector<Poly>& opens, std::size_t& eliminated) {
  const std::size_t nu = c.ring.size() - c.marked;
  for (;;) {
    std::optional<std::pair<std::size_t, Poly>> pick;
    for (const auto& g : basis) {
      for (std::size_t v : g.support()) {
        if (v >= nu) continue;
        Scalar coeff = 0;
        bool only_linear = true;
        for (const auto& [e, a] : g.terms()) {
          if (!e[v]) continue;
          if (e[v] == 1 && total_degree(e) == 1) coeff = a;
          else only_linear = false;
        }
        if (only_linear && coeff != 0) {
          Exponents ev(c.ring.size(), 0);
          ev[v] = 1;
          Poly rest = g - Poly::monomial(c.ring, ev, coeff);
          pick = {v, rest.scaled(c.ring.field().neg(c.ring.field().inv(coeff)))};
          break;
        }
      }
      if (pick) break;
    }
    if (!pick) return;
    std::vector<Poly> images;
    for (std::size_t i = 0; i < c.ring.size(); ++i)
      images.push_back(i == pick->first ? pick->second : Poly::variable(c.ring, i));
    std::vector<Poly> next;
    for (const auto& g : basis) next.push_back(g.substitute(images, c.ring));
    for (auto& g : opens) g = g.substitute(images, c.ring);
    basis = reduced_groebner_basis(c.ring, std::move(next));
    ++eliminated;
    if (!basis.empty() && basis[0].is_constant()) return;
  }
}

// The class of one conjunction: zero or a single monomial.
KClass conj_class(const Conj& c) {
  KClass out(c.base);
  auto basis = reduced_groebner_basis(c.ring, c.eqs);
  auto is_unit = [](const std::vector<Poly>& b) { return !b.empty() && b[0].is_constant(); };
  if (is_unit(basis)) return out;
  std::vector<Poly> opens = c.opens;
  std::size_t eliminated = 0;
  eliminate_linear(c, basis, opens, eliminated);
  if (is_unit(basis)) return out;
  auto reduced = reduce_opens(opens, basis);
  if (!reduced) return out;
  opens = *reduced;

  const std::size_t n = c.ring.size(), nu = n - c.marked;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  auto join = [&](std::size_t a, std::size_t b) { parent[root(a)] = root(b); };
  for (std::size_t i = nu; i + 1 < n; ++i) join(i, i + 1);
  std::vector<bool> used(n, false);
  auto link = [&](const Poly& g) {
    auto sup = g.support();
    for (std::size_t v : sup) used[v] = true;
    for (std::size_t i = 1; i < sup.size(); ++i) join(sup[0], sup[i]);
  };
  for (const auto& g : basis) link(g);
  for (const auto& g : opens) link(g);

  long free_vars = 0;
  for (std::size_t v = 0; v < nu; ++v)
    if (!used[v]) ++free_vars;
  free_vars -= static_cast<long>(eliminated);

  std::map<std::size_t, Component> comps;
  for (std::size_t v = 0; v < nu; ++v)
    if (used[v]) comps[root(v)].unmarked.push_back(v);
  std::optional<std::size_t> rel_root;
  if (c.base) {
    rel_root = root(nu == n ? 0 : nu);
    if (nu < n) comps[*rel_root].relative = true;
  }
  auto owner = [&](const Poly& g) -> std::optional<std::size_t> {
    auto sup = g.support();
    if (sup.empty()) return std::nullopt;
    return root(sup[0]);
  };
  for (const auto& g : basis)
    if (auto r = owner(g)) comps[*r].eqs.push_back(g);
  for (const auto& g : opens)
    if (auto r = owner(g)) comps[*r].opens.push_back(g);

  Monomial mono;
  mono.lexp = free_vars;
  for (auto& [r, comp] : comps) {
    if (comp.relative) {
      if (comp.unmarked.empty() && comp.opens.empty()) {
        // compare with the base itself
        std::vector<Poly> base_eqs;
        std::vector<Poly> images;
        for (std::size_t i = 0; i < c.marked; ++i) images.push_back(Poly::variable(c.ring, nu + i));
        for (const auto& g : c.base->equations()) base_eqs.push_back(g.substitute(images, c.ring));
        if (reduced_groebner_basis(c.ring, base_eqs) == reduced_groebner_basis(c.ring, comp.eqs)) continue;
      }
      auto f = canonical_factor(c, comp);
      mono.relative = f->key;
      register_factor(f);
    } else {
      auto f = canonical_factor(c, comp);
      mono.factors.push_back(f->key);
      register_factor(f);
    }
  }
  std::sort(mono.factors.begin(), mono.factors.end());
  out.add_term(mono, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Scissor rewriting

using Leaves = std::vector<SieveExpr>;

Leaves sorted_leaves(Leaves l) {
  std::sort(l.begin(), l.end(), [](const SieveExpr& a, const SieveExpr& b) { return a.to_string() < b.to_string(); });
  l.erase(std::unique(l.begin(), l.end(), [](const SieveExpr& a, const SieveExpr& b) { return a.to_string() == b.to_string(); }),
          l.end());
  return l;
}

std::vector<Leaves> dnf(const SieveExpr& s) {
  switch (s.kind()) {
    case SieveKind::Full:
      return {Leaves{}};
    case SieveKind::Empty:
      return {};
    case SieveKind::Union: {
      auto a = dnf(s.left());
      auto b = dnf(s.right());
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case SieveKind::Intersection: {
      auto a = dnf(s.left());
      auto b = dnf(s.right());
      std::vector<Leaves> out;
      for (const auto& x : a)
        for (const auto& y : b) {
          Leaves l = x;
          l.insert(l.end(), y.begin(), y.end());
          out.push_back(sorted_leaves(std::move(l)));
        }
      return out;
    }
    default:
      return {Leaves{s}};
  }
}

std::string leaves_key(const Leaves& l) {
  std::string k;
  for (const auto& s : l) k += s.to_string() + ";";
  return k;
}

struct ClassBuilder {
  SchemePtr ambient;
  std::optional<Morphism> structure;  // relative classes
  std::map<std::string, KClass> conj_cache;
  std::map<std::string, KClass> union_cache;

  SchemePtr base() const { return structure ? structure->target() : nullptr; }

  KClass opaque(const Leaves& leaves) {
    std::vector<Poly> closed = ambient->equations();
    for (const auto& l : leaves)
      if (l.kind() == SieveKind::Closed) closed.insert(closed.end(), l.equations().begin(), l.equations().end());
    auto basis = reduced_groebner_basis(ambient->ring(), closed);
    KClass out(base());
    if (!basis.empty() && basis[0].is_constant()) return out;
    SieveExpr s = SieveExpr::full(ambient);
    for (const auto& l : leaves) s = s & l;
    auto f = std::make_shared<FactorData>();
    f->key = "{" + ambient->to_string() + " : " + s.to_string();
    if (structure) {
      f->key += " -> (";
      for (std::size_t i = 0; i < structure->images().size(); ++i)
        f->key += (i ? ", " : "") + structure->images()[i].to_string();
      f->key += ")";
      f->base = base();
      f->structure = *structure;
    }
    f->key += "} over " + ambient->field().to_string();
    f->ambient = ambient;
    f->sieve = s;
    Monomial m;
    if (structure) m.relative = f->key;
    else m.factors.push_back(f->key);
    register_factor(f);
    out.add_term(m, 1);
    return out;
  }

  KClass conj(const Leaves& leaves) {
    auto key = leaves_key(leaves);
    if (auto it = conj_cache.find(key); it != conj_cache.end()) return it->second;
    for (const auto& l : leaves)
      if (l.kind() == SieveKind::Image) return conj_cache[key] = opaque(leaves);
    const std::size_t n = ambient->ring().size();
    const std::size_t k = structure ? structure->target()->ring().size() : 0;
    PolyRing ring(ambient->field(), conj_names(n, k, "u"));
    std::vector<Poly> images, base_images;
    for (std::size_t i = 0; i < n; ++i) images.push_back(Poly::variable(ring, i));
    for (std::size_t i = 0; i < k; ++i) base_images.push_back(Poly::variable(ring, n + i));
    Conj c{ring, k, base(), {}, {}};
    for (const auto& g : ambient->equations()) c.eqs.push_back(g.substitute(images, ring));
    for (const auto& l : leaves) {
      if (l.kind() == SieveKind::Closed)
        for (const auto& g : l.equations()) c.eqs.push_back(g.substitute(images, ring));
      if (l.kind() == SieveKind::Open) c.opens.push_back(l.function().substitute(images, ring));
    }
    if (structure) {
      for (std::size_t i = 0; i < k; ++i)
        c.eqs.push_back(base_images[i] - structure->images()[i].substitute(images, ring));
      for (const auto& g : structure->target()->equations()) c.eqs.push_back(g.substitute(base_images, ring));
    }
    return conj_cache[key] = conj_class(c);
  }

  bool obviously_empty(const Leaves& l) {
    for (const auto& s : l)
      if (s.kind() == SieveKind::Empty) return true;
    return false;
  }

  // Inclusion-exclusion: [C_1 | ... | C_k] = [C_1 | ... | C_k-1] + [C_k]
  //   - [(C_1 & C_k) | ... | (C_k-1 & C_k)].
  KClass union_of(std::vector<Leaves> cs) {
    std::vector<Leaves> kept;
    for (auto& c : cs) {
      if (obviously_empty(c)) continue;
      c = sorted_leaves(std::move(c));
      if (conj(c).is_zero()) continue;
      kept.push_back(std::move(c));
    }
    // drop conjunctions containing all leaves of another one
    std::vector<Leaves> minimal;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      bool absorbed = false;
      for (std::size_t j = 0; j < kept.size() && !absorbed; ++j) {
        if (i == j) continue;
        const auto ki = leaves_key(kept[i]), kj = leaves_key(kept[j]);
        bool subset = std::includes(kept[i].begin(), kept[i].end(), kept[j].begin(), kept[j].end(),
                                    [](const SieveExpr& a, const SieveExpr& b) { return a.to_string() < b.to_string(); });
        if (subset && (kept[i].size() > kept[j].size() || (ki == kj && j < i))) absorbed = true;
      }
      if (!absorbed) minimal.push_back(kept[i]);
    }
    std::sort(minimal.begin(), minimal.end(),
              [](const Leaves& a, const Leaves& b) { return leaves_key(a) < leaves_key(b); });
    if (minimal.empty()) return KClass(base());
    if (minimal.size() == 1) return conj(minimal[0]);
    std::string key;
    for (const auto& c : minimal) key += leaves_key(c) + "|";
    if (auto it = union_cache.find(key); it != union_cache.end()) return it->second;
    Leaves last = minimal.back();
    minimal.pop_back();
    std::vector<Leaves> meets;
    for (const auto& c : minimal) {
      Leaves l = c;
      l.insert(l.end(), last.begin(), last.end());
      meets.push_back(std::move(l));
    }
    KClass r = union_of(minimal) + conj(last) - union_of(std::move(meets));
    return union_cache[key] = r;
  }

  KClass of(const SieveExpr& s) {
    auto terms = dnf(s);
    if (terms.size() > 24) fail(ErrorKind::CapExceeded, "too many union branches for scissor rewriting");
    return union_of(std::move(terms));
  }
};

RelativeSieve relative_view(const FactorData& f) {
  if (!f.structure) fail(ErrorKind::InvalidArgument, "factor has no structure map");
  return RelativeSieve(*f.sieve, *f.structure);
}

KClass monomial_class(const Monomial& m, const SchemePtr& base, bool without_relative) {
  KClass out(base);
  Monomial copy = m;
  if (without_relative) copy.relative.clear();
  out.add_term(copy, 1);
  return out;
}

// Relative sieve of the relative part of a monomial ([S] if none).
RelativeSieve relative_part(const Monomial& m, const SchemePtr& base) {
  if (m.relative.empty()) return RelativeSieve::unit(base);
  return relative_view(*find_factor(m.relative));
}

std::string fat_key(const FatPointPtr& m) { return m->field().to_string() + ":" + m->to_string(); }

Scalar power_of(const Scalar& q, long e) {
  Scalar r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= q;
  return e < 0 ? Scalar(1) / r : r;
}

Integer binomial(const Integer& n, unsigned long k) {
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

CountVector factor_counts(const std::string& key, const FatPointPtr& m, const Caps& caps) {
  auto& r = registry();
  const auto cache_key = std::make_pair(key, fat_key(m));
  {
    std::lock_guard lock(r.mutex);
    if (auto it = r.counts.find(cache_key); it != r.counts.end()) return it->second;
  }
  auto f = find_factor(key);
  CountVector out;
  if (f->kind == FactorKind::Sym) {
    Scalar n = counting_hom(*f->inner, m, caps);
    if (n.get_den() != 1 || n < 0) fail(ErrorKind::Unsupported, "symmetric power of a non-effective count");
    out.push_back(Scalar(binomial(n.get_num() + f->power - 1, f->power)));
  } else if (f->structure) {
    for (auto c : fiber_counts(relative_view(*f), m, caps)) out.push_back(Scalar(static_cast<unsigned long>(c)));
  } else {
    out.push_back(Scalar(static_cast<unsigned long>(count(*f->sieve, m, caps))));
  }
  std::lock_guard lock(r.mutex);
  r.counts.emplace(cache_key, out);
  return out;
}

std::size_t base_size(const SchemePtr& base, const FatPointPtr& m, const Caps& caps) {
  if (!base) return 1;
  FpAlgebra alg(m->algebra());
  PointEnumerator en(alg, base->ring(), base->equations(), caps.max_candidates);
  return static_cast<std::size_t>(en.count());
}

}  // namespace

// ---------------------------------------------------------------------------
// KClass

std::string Monomial::to_string() const {
  std::string s;
  if (!relative.empty()) s += "<" + relative + ">";
  for (const auto& f : factors) s += (s.empty() ? "" : "*") + ("[" + f + "]");
  if (lexp != 0) s += (s.empty() ? "" : "*") + (lexp == 1 ? std::string("L") : "L^" + std::to_string(lexp));
  return s.empty() ? "1" : s;
}

void KClass::add_term(const Monomial& m, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

KClass KClass::one(const SchemePtr& base) { return integer(1, base); }

KClass KClass::integer(long n, const SchemePtr& base) {
  KClass c(base);
  c.add_term(Monomial{}, n);
  return c;
}

KClass KClass::lefschetz(long z, const SchemePtr& base) {
  KClass c(base);
  c.add_term(Monomial{"", {}, z}, 1);
  return c;
}

KClass KClass::of(const SieveExpr& s) {
  ClassBuilder b{s.ambient(), std::nullopt, {}, {}};
  return b.of(s);
}

KClass KClass::of(const SchemePtr& x) { return of(SieveExpr::full(x)); }

KClass KClass::of(const RelativeSieve& s) {
  ClassBuilder b{s.sieve.ambient(), s.structure, {}, {}};
  return b.of(s.sieve);
}

KClass KClass::sym(unsigned k, const KClass& inner) {
  if (inner.base()) fail(ErrorKind::Unsupported, "symmetric powers of relative classes");
  if (k == 0) return one();
  if (k == 1 || inner.is_zero() || inner == one()) return inner;
  for (const auto& [m, c] : inner.terms())
    if (m.lexp < 0) fail(ErrorKind::Unsupported, "symmetric power of a class with negative Lefschetz powers");
  auto f = std::make_shared<FactorData>();
  f->kind = FactorKind::Sym;
  f->power = k;
  f->inner = std::make_shared<const KClass>(inner);
  f->key = "Sym^" + std::to_string(k) + "(" + inner.to_string() + ")";
  KClass out;
  out.add_term(Monomial{"", {f->key}, 0}, 1);
  register_factor(std::move(f));
  return out;
}

KClass& KClass::operator+=(const KClass& o) {
  if (!base_) base_ = o.base_;
  else if (o.base_ && !same_base(base_, o.base_)) fail(ErrorKind::BaseMismatch, "sum of classes over different bases");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

KClass& KClass::operator-=(const KClass& o) { return *this += -o; }

KClass KClass::operator-() const { return scaled(-1); }

KClass KClass::scaled(const Integer& c) const {
  KClass out(base_);
  for (const auto& [m, a] : terms_) out.add_term(m, a * c);
  return out;
}

KClass operator*(const KClass& a, const KClass& b) {
  if (a.base_ && b.base_ && !same_base(a.base_, b.base_))
    fail(ErrorKind::BaseMismatch, "product of classes over different bases");
  const SchemePtr& base = a.base_ ? a.base_ : b.base_;
  KClass out(base);
  std::map<std::pair<std::string, std::string>, KClass> merged;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      m.factors = ma.factors;
      m.factors.insert(m.factors.end(), mb.factors.begin(), mb.factors.end());
      std::sort(m.factors.begin(), m.factors.end());
      m.lexp = ma.lexp + mb.lexp;
      if (ma.relative.empty() || mb.relative.empty()) {
        m.relative = ma.relative.empty() ? mb.relative : ma.relative;
        out.add_term(m, ca * cb);
        continue;
      }
      auto key = std::make_pair(ma.relative, mb.relative);
      auto it = merged.find(key);
      if (it == merged.end())
        it = merged.emplace(key, KClass::of(fiber_product(relative_part(ma, base), relative_part(mb, base)))).first;
      for (const auto& [mr, cr] : it->second.terms()) {
        Monomial r = m;
        r.relative = mr.relative;
        r.factors.insert(r.factors.end(), mr.factors.begin(), mr.factors.end());
        std::sort(r.factors.begin(), r.factors.end());
        r.lexp += mr.lexp;
        out.add_term(r, ca * cb * cr);
      }
    }
  return out;
}

KClass KClass::pow(unsigned k) const {
  KClass r = one(base_);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string KClass::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Integer a = abs(c);
    std::string body = m.to_string();
    std::string term = (a == 1) ? body : (body == "1" ? a.get_str() : a.get_str() + "*" + body);
    if (first) s += (c < 0 ? "-" : "") + term;
    else s += (c < 0 ? " - " : " + ") + term;
    first = false;
  }
  return s;
}

KClass normalize(const KClass& c) {
  KClass out(c.base());
  for (const auto& [m, a] : c.terms()) out.add_term(m, a);
  return out;
}

CountVector counting_vector(const KClass& c, const FatPointPtr& m, const Caps& caps) {
  if (!m->field().is_finite()) fail(ErrorKind::InfiniteField, "counting needs a finite field");
  const std::size_t nb = base_size(c.base(), m, caps);
  const Scalar q = power_of(Scalar(m->field().characteristic()), static_cast<long>(m->length()));
  CountVector total(nb, Scalar(0));
  for (const auto& [mono, coeff] : c.terms()) {
    Scalar scalar = Scalar(coeff) * power_of(q, mono.lexp);
    for (const auto& f : mono.factors) scalar *= factor_counts(f, m, caps).at(0);
    if (mono.relative.empty()) {
      for (auto& t : total) t += scalar;
    } else {
      auto fc = factor_counts(mono.relative, m, caps);
      for (std::size_t i = 0; i < nb; ++i) total[i] += scalar * fc.at(i);
    }
  }
  return total;
}

Scalar counting_hom(const KClass& c, const FatPointPtr& m, const Caps& caps) {
  Scalar s = 0;
  for (const auto& v : counting_vector(c, m, caps)) s += v;
  return s;
}

// ---------------------------------------------------------------------------
// Base change

RelativeSieve pullback_sieve(const Morphism& f, const RelativeSieve& y) {
  require_same_ambient(f.target(), y.base(), "pullback of a relative sieve");
  auto amb = product(f.source(), y.sieve.ambient());
  const PolyRing& ring = amb.scheme->ring();
  std::vector<Poly> agree;
  for (std::size_t i = 0; i < f.images().size(); ++i)
    agree.push_back(f.images()[i].substitute(amb.first.images(), ring) -
                    y.structure.images()[i].substitute(amb.second.images(), ring));
  SieveExpr s = pullback(amb.second, y.sieve) & SieveExpr::closed(amb.scheme, std::move(agree));
  return RelativeSieve(std::move(s), amb.first);
}

KClass pushforward(const Morphism& f, const KClass& c) {
  if (!c.base()) fail(ErrorKind::Incompatible, "pushforward needs a relative class");
  require_same_ambient(c.base(), f.source(), "pushforward");
  KClass out(f.target());
  for (const auto& [m, coeff] : c.terms()) {
    RelativeSieve r = relative_part(m, c.base());
    KClass pushed = KClass::of(RelativeSieve(r.sieve, f.after(r.structure)));
    out += (pushed * monomial_class(m, f.target(), true)).scaled(coeff);
  }
  return out;
}

KClass pullback(const Morphism& f, const KClass& c) {
  if (!c.base()) fail(ErrorKind::Incompatible, "pullback needs a relative class");
  require_same_ambient(c.base(), f.target(), "pullback");
  KClass out(f.source());
  for (const auto& [m, coeff] : c.terms()) {
    KClass pulled = KClass::of(pullback_sieve(f, relative_part(m, c.base())));
    out += (pulled * monomial_class(m, f.source(), true)).scaled(coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simplicial classes

SimplicialClass::SimplicialClass(std::vector<KClass> levels, bool strictly_schemic)
    : levels_(std::move(levels)), strictly_schemic_(strictly_schemic) {
  if (levels_.empty()) fail(ErrorKind::InvalidArgument, "simplicial class needs a level");
}

SimplicialClass SimplicialClass::of(const SimplicialSieve& s) {
  std::vector<KClass> levels;
  if (s.symmetric) {
    if (!s.generator) fail(ErrorKind::Unsupported, "symmetric sieve without a generator");
    KClass inner = KClass::of(*s.generator);
    for (std::size_t n = 0; n <= s.top_level(); ++n) levels.push_back(KClass::sym(static_cast<unsigned>(n + 1), inner));
    return SimplicialClass(std::move(levels));
  }
  if (s.shape == SimplicialShape::Constant)
    return SimplicialClass(std::vector<KClass>(s.levels.size(), KClass::of(s.levels[0])), true);
  for (const auto& l : s.levels) levels.push_back(KClass::of(l));
  return SimplicialClass(std::move(levels));
}

SimplicialClass SimplicialClass::g(FunctorTag tag, const KClass& c, std::size_t top_level) {
  if (tag == FunctorTag::Trivial) return SimplicialClass(std::vector<KClass>(top_level + 1, c), true);
  if (c.base()) fail(ErrorKind::Unsupported, "fiber and symmetric functors on relative classes");
  std::vector<KClass> levels;
  for (std::size_t n = 0; n <= top_level; ++n) {
    KClass level;
    for (const auto& [m, coeff] : c.terms()) {
      KClass symbol;
      symbol.add_term(m, 1);
      const auto k = static_cast<unsigned>(n + 1);
      level += (tag == FunctorTag::Fiber ? symbol.pow(k) : KClass::sym(k, symbol)).scaled(coeff);
    }
    levels.push_back(level);
  }
  return SimplicialClass(std::move(levels));
}

SimplicialClass SimplicialClass::lefschetz(std::size_t top_level, long z) {
  return SimplicialClass(std::vector<KClass>(top_level + 1, KClass::lefschetz(z)), true);
}

SimplicialClass SimplicialClass::lefschetz_rule(std::size_t top_level, const std::function<long(std::size_t)>& q) {
  std::vector<KClass> levels;
  bool constant = true;
  for (std::size_t n = 0; n <= top_level; ++n) {
    levels.push_back(KClass::lefschetz(q(n)));
    constant = constant && q(n) == q(0);
  }
  return SimplicialClass(std::move(levels), constant);
}

const KClass& SimplicialClass::h(std::size_t n) const {
  if (n >= levels_.size())
    fail(ErrorKind::LevelOutOfRange, "level " + std::to_string(n) + " above the skeletal level " +
                                         std::to_string(top_level()));
  return levels_[n];
}

SimplicialClass& SimplicialClass::operator+=(const SimplicialClass& o) {
  if (levels_.size() != o.levels_.size()) fail(ErrorKind::LevelOutOfRange, "simplicial classes of different heights");
  for (std::size_t n = 0; n < levels_.size(); ++n) levels_[n] += o.levels_[n];
  strictly_schemic_ = strictly_schemic_ && o.strictly_schemic_;
  return *this;
}

SimplicialClass& SimplicialClass::operator-=(const SimplicialClass& o) {
  if (levels_.size() != o.levels_.size()) fail(ErrorKind::LevelOutOfRange, "simplicial classes of different heights");
  for (std::size_t n = 0; n < levels_.size(); ++n) levels_[n] -= o.levels_[n];
  strictly_schemic_ = strictly_schemic_ && o.strictly_schemic_;
  return *this;
}

SimplicialClass operator*(const SimplicialClass& a, const SimplicialClass& b) {
  if (a.levels_.size() != b.levels_.size()) fail(ErrorKind::LevelOutOfRange, "simplicial classes of different heights");
  std::vector<KClass> levels;
  for (std::size_t n = 0; n < a.levels_.size(); ++n) levels.push_back(a.levels_[n] * b.levels_[n]);
  return SimplicialClass(std::move(levels), a.strictly_schemic_ && b.strictly_schemic_);
}

std::string SimplicialClass::to_string() const {
  std::string s = "<";
  for (std::size_t n = 0; n < levels_.size(); ++n) s += (n ? "; " : "") + levels_[n].to_string();
  return s + ">";
}

bool h_injective_on(const std::vector<SimplicialClass>& generators, std::size_t n) {
  for (const auto& g : generators)
    if (!g.strictly_schemic()) fail(ErrorKind::Unsupported, "injectivity is only checked on strictly schemic classes");
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!(generators[i] == generators[j]) && generators[i].h(n) == generators[j].h(n)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hom-set checks

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) fail(ErrorKind::CapExceeded, "hom-set too large to enumerate");
    r *= base;
  }
  return r;
}

// Mixed-radix decoding of a choice index.
std::vector<std::size_t> decode(std::uint64_t idx, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> out(radices.size());
  for (std::size_t i = 0; i < radices.size(); ++i) {
    out[i] = static_cast<std::size_t>(idx % radices[i]);
    idx /= radices[i];
  }
  return out;
}

}  // namespace

HomVerdict tau_adjunction_check(const SieveExpr& y, const SimplicialSieve& x, std::size_t n, const FatPointPtr& m,
                                const Caps& caps) {
  if (x.symmetric) fail(ErrorKind::Unsupported, "symmetric sieves carry no face maps");
  const std::size_t top = x.top_level();
  if (n > top) fail(ErrorKind::LevelOutOfRange, "level above the skeletal level");
  FpAlgebra alg(m->algebra());
  auto ys = flat_points(y, m, caps);
  std::vector<std::vector<FlatPoint>> levels;
  std::vector<std::set<FlatPoint>> members;
  for (std::size_t k = 0; k <= top; ++k) {
    levels.push_back(flat_points(x.levels[k], m, caps));
    members.emplace_back(levels.back().begin(), levels.back().end());
  }
  std::vector<std::vector<PointMap>> faces(top + 1), degens(top + 1);
  for (std::size_t k = 1; k <= top; ++k)
    for (const auto& f : x.ambient.faces[k]) faces[k].emplace_back(f, alg);
  for (std::size_t k = 0; k < top; ++k)
    for (const auto& s : x.ambient.degeneracies[k]) degens[k].emplace_back(s, alg);

  using Family = std::vector<std::vector<FlatPoint>>;  // [level][y]
  auto extend_from_zero = [&](const std::vector<FlatPoint>& f0) {
    Family f{f0};
    for (std::size_t k = 0; k < top; ++k) {
      std::vector<FlatPoint> next;
      for (const auto& v : f[k]) next.push_back(degens[k][0](v));
      f.push_back(std::move(next));
    }
    return f;
  };
  auto natural = [&](const Family& f) {
    for (std::size_t k = 0; k <= top; ++k)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (!members[k].count(f[k][j])) return false;
        if (k > 0)
          for (const auto& d : faces[k])
            if (d(f[k][j]) != f[k - 1][j]) return false;
        if (k < top)
          for (const auto& s : degens[k])
            if (s(f[k][j]) != f[k + 1][j]) return false;
      }
    return true;
  };
  auto extend = [&](const std::vector<FlatPoint>& g) {
    std::vector<FlatPoint> f0 = g;
    for (std::size_t k = n; k > 0; --k)
      for (auto& v : f0) v = faces[k][0](v);
    return extend_from_zero(f0);
  };

  HomVerdict v;
  const std::uint64_t left_total = checked_power(levels[0].size(), ys.size(), caps.max_candidates);
  std::vector<std::size_t> radix0(ys.size(), levels[0].size());
  for (std::uint64_t idx = 0; idx < left_total; ++idx) {
    auto choice = decode(idx, radix0);
    std::vector<FlatPoint> f0;
    for (auto c : choice) f0.push_back(levels[0][c]);
    Family f = extend_from_zero(f0);
    if (!natural(f)) continue;
    ++v.left;
    if (extend(f[n]) != f) {
      v.mutual_inverse = false;
      v.detail = "constant extension of the restriction differs from a transformation";
    }
  }
  const std::uint64_t right_total = checked_power(levels[n].size(), ys.size(), caps.max_candidates);
  std::vector<std::size_t> radix_n(ys.size(), levels[n].size());
  for (std::uint64_t idx = 0; idx < right_total; ++idx) {
    auto choice = decode(idx, radix_n);
    std::vector<FlatPoint> g;
    for (auto c : choice) g.push_back(levels[n][c]);
    ++v.right;
    Family f = extend(g);
    if (!natural(f) || f[n] != g) {
      if (v.mutual_inverse) v.detail = "a map into level " + std::to_string(n) + " is not the restriction of its extension";
      v.mutual_inverse = false;
    }
  }
  return v;
}

HomVerdict pushpull_adjunction_check(const Morphism& f, const RelativeSieve& x, const RelativeSieve& y,
                                     const FatPointPtr& m, const Caps& caps) {
  require_same_ambient(x.base(), f.source(), "pushforward source");
  require_same_ambient(y.base(), f.target(), "pullback target");
  FpAlgebra alg(m->algebra());
  const std::size_t d = alg.dimension();
  auto xs = flat_points(x.sieve, m, caps);
  auto yps = flat_points(y.sieve, m, caps);
  RelativeSieve fy = pullback_sieve(f, y);
  auto fys = flat_points(fy.sieve, m, caps);
  std::set<FlatPoint> fy_members(fys.begin(), fys.end());
  PointMap jx(x.structure, alg), jy(y.structure, alg), fmap(f, alg);
  const std::size_t s_width = f.source()->ring().size() * d;
  auto pi1 = [&](const FlatPoint& q) { return FlatPoint(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(s_width)); };
  auto pi2 = [&](const FlatPoint& q) { return FlatPoint(q.begin() + static_cast<std::ptrdiff_t>(s_width), q.end()); };
  auto pair = [&](const FlatPoint& s, const FlatPoint& yp) {
    FlatPoint q = s;
    q.insert(q.end(), yp.begin(), yp.end());
    return q;
  };

  std::vector<FlatPoint> jxs, fjxs;
  for (const auto& p : xs) {
    jxs.push_back(jx(p));
    fjxs.push_back(fmap(jxs.back()));
  }
  // candidates for each x on both sides
  std::vector<std::vector<FlatPoint>> left_choices(xs.size()), right_choices(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (const auto& yp : yps)
      if (jy(yp) == fjxs[i]) left_choices[i].push_back(yp);
    for (const auto& q : fys)
      if (pi1(q) == jxs[i]) right_choices[i].push_back(q);
  }
  auto total = [&](const std::vector<std::vector<FlatPoint>>& choices) {
    std::uint64_t t = 1;
    for (const auto& c : choices) {
      if (c.empty()) return std::uint64_t{0};
      if (t > caps.max_candidates / c.size()) fail(ErrorKind::CapExceeded, "hom-set too large to enumerate");
      t *= c.size();
    }
    return t;
  };
  auto radices = [](const std::vector<std::vector<FlatPoint>>& choices) {
    std::vector<std::size_t> r;
    for (const auto& c : choices) r.push_back(c.size());
    return r;
  };

  HomVerdict v;
  const auto lt = total(left_choices), rt = total(right_choices);
  const auto lr = radices(left_choices), rr = radices(right_choices);
  for (std::uint64_t idx = 0; idx < lt; ++idx) {
    auto choice = decode(idx, lr);
    ++v.left;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const FlatPoint& g = left_choices[i][choice[i]];
      FlatPoint h = pair(jxs[i], g);
      if (!fy_members.count(h) || pi2(h) != g) {
        v.mutual_inverse = false;
        v.detail = "adjunct of a map over the target base leaves the pullback";
      }
    }
  }
  for (std::uint64_t idx = 0; idx < rt; ++idx) {
    auto choice = decode(idx, rr);
    ++v.right;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const FlatPoint& h = right_choices[i][choice[i]];
      FlatPoint g = pi2(h);
      if (jy(g) != fjxs[i] || pair(jxs[i], g) != h) {
        v.mutual_inverse = false;
        v.detail = "adjunct of a map into the pullback is not over the target base";
      }
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Cech nerve rings

CechKRing::CechKRing(const SchemePtr& s, std::size_t top_level)
    : nerve_(SimplicialSieve::fiber(SieveExpr::full(s), top_level).ambient) {}

KClass CechKRing::push(std::size_t n, std::size_t i, const KClass& c) const { return pushforward(face(n, i), c); }

KClass CechKRing::pull(std::size_t n, std::size_t i, const KClass& c) const { return pullback(face(n, i), c); }

std::optional<std::string> CechKRing::check_identities(std::size_t n, const KClass& c) const {
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      KClass a = push(n - 1, i, push(n, j, c));
      KClass b = push(n - 1, j - 1, push(n, i, c));
      if (!(a == b))
        return "d_" + std::to_string(i) + " d_" + std::to_string(j) + " != d_" + std::to_string(j - 1) + " d_" +
               std::to_string(i) + " at level " + std::to_string(n) + ": " + a.to_string() + " vs " + b.to_string();
    }
  return std::nullopt;
}

}  // namespace motivic
