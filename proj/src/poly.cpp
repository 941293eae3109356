#include "motivic/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "motivic/error.hpp"

namespace motivic {

unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (auto x : e) d += x;
  return d;
}

bool DegRevLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exponents lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

PolyRing::PolyRing(Field field, std::vector<std::string> names)
    : data_(std::make_shared<const Data>(Data{field, std::move(names)})) {
  for (std::size_t i = 0; i < data_->names.size(); ++i)
    for (std::size_t j = i + 1; j < data_->names.size(); ++j)
      if (data_->names[i] == data_->names[j])
        fail(ErrorKind::InvalidArgument, "duplicate variable name '" + data_->names[i] + "'");
}

std::optional<std::size_t> PolyRing::index_of(std::string_view name) const {
  const auto& n = data_->names;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] == name) return i;
  return std::nullopt;
}

void require_same_ring(const PolyRing& a, const PolyRing& b, const char* what) {
  if (!(a.field() == b.field())) fail(ErrorKind::FieldMismatch, std::string(what) + ": field mismatch");
  if (!(a == b)) fail(ErrorKind::VariableMismatch, std::string(what) + ": variable lists differ");
}

Poly Poly::constant(const PolyRing& ring, const Scalar& c) {
  Poly p(ring);
  p.add_term(Exponents(ring.size(), 0), c);
  return p;
}

Poly Poly::variable(const PolyRing& ring, std::size_t index) {
  Exponents e(ring.size(), 0);
  e.at(index) = 1;
  return monomial(ring, std::move(e), 1);
}

Poly Poly::variable(const PolyRing& ring, std::string_view name) {
  auto idx = ring.index_of(name);
  if (!idx) fail(ErrorKind::VariableMismatch, "unknown variable '" + std::string(name) + "'");
  return variable(ring, *idx);
}

Poly Poly::monomial(const PolyRing& ring, Exponents e, const Scalar& c) {
  Poly p(ring);
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

const Exponents& Poly::leading_monomial() const {
  if (terms_.empty()) fail(ErrorKind::InvalidArgument, "leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const Scalar& Poly::leading_coefficient() const {
  if (terms_.empty()) fail(ErrorKind::InvalidArgument, "leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

Scalar Poly::constant_term() const { return coefficient(Exponents(ring_.size(), 0)); }

Scalar Poly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

unsigned Poly::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

std::vector<std::size_t> Poly::support() const {
  std::vector<bool> used(ring_.size(), false);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) used[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) out.push_back(i);
  return out;
}

void Poly::add_term(const Exponents& e, const Scalar& c) {
  if (e.size() != ring_.size()) fail(ErrorKind::VariableMismatch, "exponent vector length mismatch");
  const Field& f = ring_.field();
  Scalar v = f.reduce(c);
  if (v == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, v);
  if (!inserted) {
    it->second = f.add(it->second, v);
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_ring(ring_, o.ring_, "addition");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_ring(ring_, o.ring_, "subtraction");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly Poly::operator-() const { return scaled(-1); }

Poly Poly::scaled(const Scalar& c) const {
  Poly r(ring_);
  const Field& f = ring_.field();
  Scalar cc = f.reduce(c);
  if (cc == 0) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, f.mul(v, cc));
  return r;
}

Poly Poly::times_monomial(const Exponents& m, const Scalar& c) const {
  Poly r(ring_);
  const Field& f = ring_.field();
  Scalar cc = f.reduce(c);
  if (cc == 0) return r;
  for (const auto& [e, v] : terms_) {
    Exponents s(e);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::uint16_t>(s[i] + m[i]);
    // multiplying by a monomial preserves the order
    r.terms_.emplace_hint(r.terms_.end(), std::move(s), f.mul(v, cc));
  }
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_ring(a.ring_, b.ring_, "multiplication");
  Poly r(a.ring_);
  for (const auto& [e, c] : b.terms_) r += a.times_monomial(e, c);
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(ring_, 1);
  Poly base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(ring_.field().inv(leading_coefficient()));
}

Poly Poly::substitute(std::span<const Poly> images, const PolyRing& target) const {
  if (images.size() != ring_.size())
    fail(ErrorKind::VariableMismatch, "substitution needs one image per variable");
  for (const auto& img : images) require_same_ring(img.ring(), target, "substitution");
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](std::size_t i, unsigned k) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(target, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Poly term = constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = term * power(i, e[i]);
    r += term;
  }
  return r;
}

Poly Poly::rename_into(const PolyRing& target) const {
  if (!(ring_.field() == target.field())) fail(ErrorKind::FieldMismatch, "rename: field mismatch");
  std::vector<std::size_t> map(ring_.size(), SIZE_MAX);
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    if (auto j = target.index_of(ring_.names()[i])) map[i] = *j;
  }
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Exponents t(target.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (map[i] == SIZE_MAX)
        fail(ErrorKind::VariableMismatch, "variable '" + ring_.names()[i] + "' missing from target ring");
      t[map[i]] = e[i];
    }
    r.add_term(t, c);
  }
  return r;
}

namespace {

std::string monomial_text(const Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!s.empty()) s += '*';
    s += names[i];
    if (e[i] > 1) s += '^' + std::to_string(e[i]);
  }
  return s;
}

}  // namespace

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Scalar mag = abs(c);
    bool negative = c < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono = monomial_text(e, ring_.names());
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const PolyRing& ring) : text_(text), ring_(ring) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorKind::InvalidArgument,
         "polynomial '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  Poly term() {
    Poly acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        Poly d = factor();
        if (!d.is_constant() || d.is_zero()) error("division only by nonzero constants");
        acc = acc.scaled(ring_.field().inv(d.constant_term()));
      } else {
        return acc;
      }
    }
  }

  Poly factor() {
    Poly base = unary();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) error("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Poly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return atom();
  }

  Poly atom() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Poly::constant(ring_, Scalar(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
        ++pos_;
      auto name = text_.substr(start, pos_ - start);
      auto idx = ring_.index_of(name);
      if (!idx) error("unknown variable '" + std::string(name) + "'");
      return Poly::variable(ring_, *idx);
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const PolyRing& ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const PolyRing& ring) { return PolyParser(text, ring).parse(); }

}  // namespace motivic
