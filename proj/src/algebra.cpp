#include "motivic/algebra.hpp"

#include <algorithm>

#include "motivic/error.hpp"

namespace motivic {

QuotientAlgebra::QuotientAlgebra(Ideal presentation) : presentation_(std::move(presentation)) {
  auto basis = quotient_basis(presentation_);
  if (!basis) fail(ErrorKind::NotFinite, "quotient algebra is infinite dimensional");
  basis_ = std::move(*basis);
  const std::size_t n = basis_.size();
  table_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Exponents e(basis_[i].size());
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = static_cast<std::uint16_t>(basis_[i][v] + basis_[j][v]);
      Element c = coordinates(Poly::monomial(ring(), e, 1));
      table_[i * n + j] = c;
      table_[j * n + i] = std::move(c);
    }
  }
}

std::ptrdiff_t QuotientAlgebra::basis_index(const Exponents& e) const {
  auto it = std::find(basis_.begin(), basis_.end(), e);
  return it == basis_.end() ? -1 : it - basis_.begin();
}

Element QuotientAlgebra::one() const {
  Element e = zero();
  if (!e.empty()) e[0] = 1;
  return e;
}

Element QuotientAlgebra::coordinates(const Poly& p) const {
  Poly r = presentation_.normal_form(p);
  Element out = zero();
  for (const auto& [e, c] : r.terms()) {
    auto idx = basis_index(e);
    if (idx < 0) fail(ErrorKind::InvalidArgument, "normal form left a non-standard monomial");
    out[static_cast<std::size_t>(idx)] = c;
  }
  return out;
}

Poly QuotientAlgebra::to_poly(const Element& e) const {
  Poly p(ring());
  for (std::size_t i = 0; i < e.size(); ++i) p.add_term(basis_[i], e[i]);
  return p;
}

Element QuotientAlgebra::add(const Element& a, const Element& b) const {
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = field().add(a[i], b[i]);
  return out;
}

Element QuotientAlgebra::scale(const Element& a, const Scalar& c) const {
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = field().mul(a[i], c);
  return out;
}

Element QuotientAlgebra::multiply(const Element& a, const Element& b) const {
  const std::size_t n = dimension();
  Element out = zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      Scalar c = a[i] * b[j];
      const Element& t = table_[i * n + j];
      for (std::size_t k = 0; k < n; ++k)
        if (t[k] != 0) out[k] += c * t[k];
    }
  }
  for (auto& x : out) x = field().reduce(x);
  return out;
}

Element QuotientAlgebra::evaluate(const Poly& f, std::span<const Element> images) const {
  if (images.size() != f.ring().size())
    fail(ErrorKind::VariableMismatch, "evaluation needs one image per variable");
  std::vector<std::vector<Element>> powers(images.size());
  auto power = [&](std::size_t v, unsigned k) -> const Element& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(one());
    while (cache.size() <= k) cache.push_back(multiply(cache.back(), images[v]));
    return cache[k];
  };
  Element acc = zero();
  for (const auto& [e, c] : f.terms()) {
    Element term = scale(one(), c);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v]) term = multiply(term, power(v, e[v]));
    acc = add(acc, term);
  }
  return acc;
}

bool QuotientAlgebra::is_nilpotent(const Element& e) const {
  Element x = e;
  std::size_t k = 1;
  while (k < std::max<std::size_t>(dimension(), 1)) {
    x = multiply(x, x);
    k *= 2;
  }
  return std::all_of(x.begin(), x.end(), [](const Scalar& s) { return s == 0; });
}

bool QuotientAlgebra::is_unit(const Element& e) const { return !e.empty() && e[0] != 0; }

QuotientAlgebra tensor_product(const QuotientAlgebra& a, const QuotientAlgebra& b) {
  if (!(a.field() == b.field())) fail(ErrorKind::FieldMismatch, "tensor product over different fields");
  std::vector<std::string> names = a.ring().names();
  std::vector<std::string> b_names;
  for (const auto& n : b.ring().names()) {
    std::string candidate = n;
    while (std::find(names.begin(), names.end(), candidate) != names.end()) candidate += '\'';
    names.push_back(candidate);
    b_names.push_back(candidate);
  }
  PolyRing ring(a.field(), names);
  std::vector<Poly> a_images, b_images;
  for (std::size_t i = 0; i < a.ring().size(); ++i) a_images.push_back(Poly::variable(ring, i));
  for (std::size_t i = 0; i < b.ring().size(); ++i) b_images.push_back(Poly::variable(ring, a.ring().size() + i));
  std::vector<Poly> gens;
  for (const auto& g : a.presentation().generators()) gens.push_back(g.substitute(a_images, ring));
  for (const auto& g : b.presentation().generators()) gens.push_back(g.substitute(b_images, ring));
  return QuotientAlgebra(Ideal(ring, std::move(gens)));
}

AlgebraMap::AlgebraMap(const QuotientAlgebra& source, const QuotientAlgebra& target, std::vector<Poly> images)
    : field_(source.field()), target_dim_(target.dimension()) {
  if (!(source.field() == target.field())) fail(ErrorKind::FieldMismatch, "algebra map over different fields");
  if (images.size() != source.ring().size())
    fail(ErrorKind::VariableMismatch, "algebra map needs one image per source variable");
  std::vector<Element> coords;
  for (const auto& img : images) coords.push_back(target.coordinates(img));
  for (const auto& g : source.presentation().generators()) {
    Element v = target.evaluate(g, coords);
    if (std::any_of(v.begin(), v.end(), [](const Scalar& s) { return s != 0; }))
      fail(ErrorKind::NotClosedImmersion, "algebra map does not respect relation " + g.to_string());
  }
  matrix_.assign(target.dimension(), std::vector<Scalar>(source.dimension(), 0));
  for (std::size_t j = 0; j < source.dimension(); ++j) {
    Element img = target.evaluate(Poly::monomial(source.ring(), source.basis()[j], 1), coords);
    for (std::size_t k = 0; k < target.dimension(); ++k) matrix_[k][j] = img[k];
  }
}

AlgebraMap AlgebraMap::by_name(const QuotientAlgebra& source, const QuotientAlgebra& target) {
  std::vector<Poly> images;
  for (const auto& n : source.ring().names()) {
    if (auto idx = target.ring().index_of(n)) images.push_back(Poly::variable(target.ring(), *idx));
    else images.push_back(Poly(target.ring()));
  }
  return AlgebraMap(source, target, std::move(images));
}

Element AlgebraMap::apply(const Element& e) const {
  Element out(target_dim_, 0);
  for (std::size_t k = 0; k < target_dim_; ++k)
    for (std::size_t j = 0; j < e.size(); ++j) out[k] = field_.add(out[k], field_.mul(matrix_[k][j], e[j]));
  return out;
}

bool AlgebraMap::is_surjective() const {
  auto m = matrix_;
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Scalar f = field_.div(m[r][c], m[rank][c]);
      for (std::size_t k = c; k < cols; ++k) m[r][k] = field_.sub(m[r][k], field_.mul(f, m[rank][k]));
    }
    ++rank;
  }
  return rank == rows;
}

FpAlgebra::FpAlgebra(const QuotientAlgebra& algebra)
    : p_(algebra.field().characteristic()), dim_(algebra.dimension()) {
  if (!algebra.field().is_finite()) fail(ErrorKind::InfiniteField, "enumeration requires a finite field");
  table_.resize(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const Element& t = algebra.product_of_basis(i, j);
      for (std::size_t k = 0; k < dim_; ++k)
        if (t[k] != 0)
          table_[i * dim_ + j].push_back({static_cast<std::uint32_t>(k), algebra.field().to_residue(t[k])});
    }
}

std::uint64_t FpAlgebra::cardinality() const {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (c > UINT64_MAX / p_) return 0;
    c *= p_;
  }
  return c;
}

void FpAlgebra::add(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    std::uint32_t s = a[i] + b[i];
    out[i] = s >= p_ ? s - p_ : s;
  }
}

void FpAlgebra::multiply(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                         std::span<std::uint32_t> out) const {
  std::uint64_t acc[64];
  std::vector<std::uint64_t> big;
  std::uint64_t* sum = acc;
  if (dim_ > 64) {
    big.assign(dim_, 0);
    sum = big.data();
  } else {
    std::fill(acc, acc + dim_, 0);
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (!b[j]) continue;
      std::uint64_t ab = std::uint64_t{a[i]} * b[j] % p_;
      for (const auto& e : table_[i * dim_ + j]) sum[e.k] = (sum[e.k] + ab * e.c) % p_;
    }
  }
  for (std::size_t k = 0; k < dim_; ++k) out[k] = static_cast<std::uint32_t>(sum[k]);
}

void FpAlgebra::decode(std::uint64_t index, std::span<std::uint32_t> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
}

Element FpAlgebra::to_element(std::span<const std::uint32_t> a) const {
  Element e;
  for (std::size_t i = 0; i < dim_; ++i) e.emplace_back(static_cast<unsigned long>(a[i]));
  return e;
}

std::vector<std::uint32_t> FpAlgebra::from_element(const Element& e) const {
  std::vector<std::uint32_t> out;
  Field f = Field::prime(p_);
  for (const auto& x : e) out.push_back(f.to_residue(x));
  return out;
}

CompiledPoly::CompiledPoly(const Poly& f, std::uint32_t p) {
  Field field = Field::prime(p);
  for (const auto& [e, c] : f.terms()) {
    Term t{field.to_residue(c), {}};
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      t.factors.emplace_back(static_cast<std::uint32_t>(v), e[v]);
      last_var_ = std::max<std::ptrdiff_t>(last_var_, static_cast<std::ptrdiff_t>(v));
    }
    terms_.push_back(std::move(t));
  }
}

void CompiledPoly::evaluate(const FpAlgebra& alg, std::span<const std::uint32_t> values,
                            std::span<std::uint32_t> out) const {
  const std::size_t d = alg.dimension();
  const std::uint32_t p = alg.p();
  std::vector<std::uint32_t> term(d), tmp(d);
  std::fill(out.begin(), out.end(), 0);
  for (const auto& t : terms_) {
    std::fill(term.begin(), term.end(), 0);
    if (d) term[0] = t.coeff;
    for (const auto& [v, e] : t.factors) {
      auto x = values.subspan(std::size_t{v} * d, d);
      for (unsigned k = 0; k < e; ++k) {
        alg.multiply(term, x, tmp);
        std::swap(term, tmp);
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      std::uint32_t s = out[i] + term[i];
      out[i] = s >= p ? s - p : s;
    }
  }
}

bool CompiledPoly::vanishes(const FpAlgebra& alg, std::span<const std::uint32_t> values) const {
  std::vector<std::uint32_t> out(alg.dimension());
  evaluate(alg, values, out);
  return std::all_of(out.begin(), out.end(), [](std::uint32_t x) { return x == 0; });
}

}  // namespace motivic
