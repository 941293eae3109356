#include "motivic/script.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>

#include "motivic/error.hpp"
#include "motivic/poly.hpp"

namespace motivic {

const char* to_string(StmtKind kind) {
  switch (kind) {
    case StmtKind::Field: return "field";
    case StmtKind::FatPoint: return "fatpoint";
    case StmtKind::Chain: return "chain";
    case StmtKind::Scheme: return "scheme";
    case StmtKind::Morphism: return "morphism";
    case StmtKind::Sieve: return "sieve";
    case StmtKind::Relative: return "relative";
    case StmtKind::Simplicial: return "simplicial";
    case StmtKind::Class: return "class";
    case StmtKind::Count: return "count";
    case StmtKind::Arc: return "arc";
    case StmtKind::Measure: return "measure";
    case StmtKind::Check: return "check";
  }
  return "?";
}

ParseError::ParseError(std::size_t line, std::size_t column, std::string token, const std::string& message)
    : std::runtime_error(message), line(line), column(column), token(std::move(token)) {}

namespace {

const std::vector<std::string> kCheckNames{"adjunction", "scissor", "continuity", "tau", "pushpull", "topo"};

struct Symbol {
  StmtKind kind;
  std::vector<std::string> vars;  // schemes: coordinates; sieves: ambient coordinates
  std::string ambient;            // sieves: ambient scheme name
};

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t number, std::map<std::string, Symbol>& symbols)
      : s_(line), line_(number), symbols_(symbols) {}

  Statement statement() {
    Statement st;
    st.line = line_;
    auto kw_col = pos_;
    std::string kw = ident("a statement keyword");
    if (kw == "field") field(st);
    else if (kw == "fatpoint") fatpoint(st);
    else if (kw == "chain") chain(st);
    else if (kw == "scheme") scheme(st);
    else if (kw == "morphism") morphism(st);
    else if (kw == "sieve") sieve(st);
    else if (kw == "relative") relative(st);
    else if (kw == "simplicial") simplicial(st);
    else if (kw == "class") klass(st);
    else if (kw == "count") count(st);
    else if (kw == "arc") arc(st);
    else if (kw == "measure") measure(st);
    else if (kw == "check") check(st);
    else error_at(kw_col, kw, "unknown statement '" + kw + "'");
    skip();
    if (pos_ < s_.size()) error("unexpected trailing input");
    return st;
  }

 private:
  // ---- lexing helpers

  [[noreturn]] void error_at(std::size_t col, const std::string& token, const std::string& message) const {
    throw ParseError(line_, col + 1, token, message);
  }
  [[noreturn]] void error(const std::string& message) const {
    std::size_t end = pos_;
    while (end < s_.size() && !std::isspace(static_cast<unsigned char>(s_[end]))) ++end;
    std::string token = pos_ < s_.size() ? std::string(s_.substr(pos_, end - pos_)) : "<end of line>";
    error_at(pos_, token, message);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool at(std::string_view word) {
    skip();
    return s_.substr(pos_, word.size()) == word;
  }
  bool accept(char c) {
    if (!at(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  void expect(std::string_view word) {
    if (!at(word)) error("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }
  bool is_ident_char(char c, bool first) const {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (!first && std::isdigit(static_cast<unsigned char>(c)));
  }
  bool peek_keyword(std::string_view word) {
    skip();
    if (s_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    return end >= s_.size() || !is_ident_char(s_[end], false);
  }
  bool accept_keyword(std::string_view word) {
    if (!peek_keyword(word)) return false;
    pos_ += word.size();
    return true;
  }
  void expect_keyword(std::string_view word) {
    if (!accept_keyword(word)) error("expected '" + std::string(word) + "'");
  }
  std::string ident(const std::string& what) {
    skip();
    if (pos_ >= s_.size() || !is_ident_char(s_[pos_], true)) error("expected " + what);
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_], false)) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  long integer() {
    skip();
    bool neg = accept('-');
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected an integer");
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ - start > 9) error_at(start, std::string(s_.substr(start, pos_ - start)), "integer too large");
    long v = std::stol(std::string(s_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }
  // Contents of a parenthesized group split at top-level commas.
  std::vector<std::pair<std::size_t, std::string>> group() {
    expect('(');
    std::vector<std::pair<std::size_t, std::string>> out;
    int depth = 0;
    std::size_t start = pos_;
    for (; pos_ < s_.size(); ++pos_) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      else if (c == ')' && depth > 0) --depth;
      else if ((c == ',' || c == ')') && depth == 0) {
        out.emplace_back(start, std::string(s_.substr(start, pos_ - start)));
        start = pos_ + 1;
        if (c == ')') {
          ++pos_;
          if (out.size() == 1 && trim(out[0].second).empty()) out.clear();
          return out;
        }
      }
    }
    error("unbalanced parenthesis");
  }
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  // ---- symbols

  void declare(Statement& st, StmtKind kind) {
    auto col = (skip(), pos_);
    st.name = ident("a name");
    if (symbols_.count(st.name)) error_at(col, st.name, "duplicate name '" + st.name + "'");
    pending_ = st.name;
    symbols_.emplace(st.name, Symbol{kind, {}, {}});
    expect('=');
  }
  const Symbol& use(std::string& name, std::initializer_list<StmtKind> kinds, const std::string& what) {
    skip();
    auto col = pos_;
    name = ident(what);
    auto it = symbols_.find(name);
    if (it == symbols_.end() || name == pending_) error_at(col, name, "'" + name + "' is used before its declaration");
    for (auto k : kinds)
      if (it->second.kind == k) return it->second;
    error_at(col, name, "'" + name + "' is not " + what);
  }

  std::string canonical_poly(std::size_t col, const std::string& text, const std::vector<std::string>& vars) {
    try {
      return parse_poly(trim(text), PolyRing(Field::rationals(), vars)).to_string();
    } catch (const Error& e) {
      error_at(col, trim(text), std::string("bad polynomial: ") + e.what());
    }
  }
  std::vector<std::string> polys(const std::vector<std::string>& vars) {
    std::vector<std::string> out;
    for (const auto& [col, text] : group()) out.push_back(canonical_poly(col, text, vars));
    return out;
  }

  // ---- pieces

  AlgebraSpec algebra() {
    AlgebraSpec a;
    expect_keyword("k");
    if (!accept('[')) return a;
    if (!accept(']')) {
      do {
        auto col = (skip(), pos_);
        auto v = ident("a variable");
        if (std::find(a.vars.begin(), a.vars.end(), v) != a.vars.end()) error_at(col, v, "repeated variable " + v);
        a.vars.push_back(v);
      } while (accept(','));
      expect(']');
    }
    if (accept('/')) a.relations = polys(a.vars);
    return a;
  }

  SieveNode::Kind leaf_kind(bool closed) { return closed ? SieveNode::Kind::Closed : SieveNode::Kind::Open; }

  std::shared_ptr<const SieveNode> sieve_expr(const Symbol& amb, const std::string& amb_name) {
    auto left = sieve_term(amb, amb_name);
    while (accept('|')) {
      auto n = std::make_shared<SieveNode>();
      n->kind = SieveNode::Kind::Union;
      n->left = left;
      n->right = sieve_term(amb, amb_name);
      left = n;
    }
    return left;
  }
  std::shared_ptr<const SieveNode> sieve_term(const Symbol& amb, const std::string& amb_name) {
    auto left = sieve_factor(amb, amb_name);
    while (accept('&')) {
      auto n = std::make_shared<SieveNode>();
      n->kind = SieveNode::Kind::Intersection;
      n->left = left;
      n->right = sieve_factor(amb, amb_name);
      left = n;
    }
    return left;
  }
  std::shared_ptr<const SieveNode> sieve_factor(const Symbol& amb, const std::string& amb_name) {
    auto n = std::make_shared<SieveNode>();
    if (accept('(')) {
      auto inner = sieve_expr(amb, amb_name);
      expect(')');
      return inner;
    }
    skip();
    auto col = pos_;
    if (accept_keyword("full")) n->kind = SieveNode::Kind::Full;
    else if (accept_keyword("empty")) n->kind = SieveNode::Kind::Empty;
    else if (peek_keyword("V") || peek_keyword("D")) {
      bool closed = s_[pos_] == 'V';
      ++pos_;
      n->kind = leaf_kind(closed);
      n->polys = polys(amb.vars);
      if (!closed && n->polys.size() != 1) error_at(col, "D", "D(...) takes one function");
      if (closed && n->polys.empty()) error_at(col, "V", "V(...) needs an equation");
    } else if (accept_keyword("im")) {
      expect('(');
      const auto& m = use(n->ref, {StmtKind::Morphism}, "a morphism");
      (void)m;
      expect(')');
      n->kind = SieveNode::Kind::Image;
    } else {
      const auto& other = use(n->ref, {StmtKind::Sieve}, "a sieve");
      if (other.ambient != amb_name) error_at(col, n->ref, "'" + n->ref + "' lives on a different ambient");
      n->kind = SieveNode::Kind::Ref;
    }
    return n;
  }

  std::shared_ptr<const ClassNode> class_expr() {
    auto left = class_term();
    for (;;) {
      ClassNode::Kind k;
      if (accept('+')) k = ClassNode::Kind::Add;
      else if (accept('-')) k = ClassNode::Kind::Sub;
      else return left;
      auto n = std::make_shared<ClassNode>();
      n->kind = k;
      n->left = left;
      n->right = class_term();
      left = n;
    }
  }
  std::shared_ptr<const ClassNode> class_term() {
    auto left = class_factor();
    while (accept('*')) {
      auto n = std::make_shared<ClassNode>();
      n->kind = ClassNode::Kind::Mul;
      n->left = left;
      n->right = class_factor();
      left = n;
    }
    return left;
  }
  std::shared_ptr<const ClassNode> class_factor() {
    auto n = std::make_shared<ClassNode>();
    if (accept('(')) {
      auto inner = class_expr();
      expect(')');
      return inner;
    }
    if (accept('-')) {
      n->kind = ClassNode::Kind::Neg;
      n->left = class_factor();
      return n;
    }
    if (accept('[')) {
      use(n->ref, {StmtKind::Scheme, StmtKind::Sieve, StmtKind::Relative, StmtKind::Class}, "a scheme, sieve or class");
      expect(']');
      n->kind = ClassNode::Kind::Ref;
      return n;
    }
    if (accept_keyword("L")) {
      n->kind = ClassNode::Kind::Lefschetz;
      n->value = accept('^') ? integer() : 1;
      return n;
    }
    skip();
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      n->kind = ClassNode::Kind::Integer;
      n->value = integer();
      return n;
    }
    error("expected a class term");
  }

  Scalar rational() {
    skip();
    auto col = pos_;
    long num = integer();
    long den = 1;
    if (accept('/')) den = integer();
    if (den <= 0) error_at(col, std::to_string(num) + "/" + std::to_string(den), "bad rational");
    Scalar q(num, den);
    q.canonicalize();
    return q;
  }

  LinearRule linear_rule() {
    LinearRule r;
    bool first = true;
    for (;;) {
      long sign = 1;
      if (accept('+')) sign = 1;
      else if (accept('-')) sign = -1;
      else if (!first) return r;
      first = false;
      skip();
      if (accept_keyword("n")) {
        r.slope += sign;
        continue;
      }
      long c = integer();
      if (accept('*')) {
        expect_keyword("n");
        r.slope += sign * c;
      } else {
        r.offset += sign * c;
      }
    }
  }

  // ---- statements

  void field(Statement& st) {
    skip();
    auto col = pos_;
    if (accept_keyword("Q")) st.word = "Q";
    else if (accept_keyword("F")) {
      long p = integer();
      if (p < 2 || p >= 65536 || !is_prime(static_cast<std::uint32_t>(p)))
        error_at(col, "F " + std::to_string(p), "F p needs a prime p < 65536");
      st.word = "F" + std::to_string(p);
    } else error("expected Q or F p");
    if (symbols_.count("@field")) error_at(col, st.word, "only one field declaration per session");
    symbols_.emplace("@field", Symbol{StmtKind::Field, {}, {}});
    st.kind = StmtKind::Field;
  }
  void fatpoint(Statement& st) {
    st.kind = StmtKind::FatPoint;
    declare(st, st.kind);
    st.algebra = algebra();
  }
  void chain(Statement& st) {
    st.kind = StmtKind::Chain;
    declare(st, st.kind);
    if (accept_keyword("rule")) {
      st.word = ident("a variable");
      expect('^');
      expect_keyword("n");
      return;
    }
    expect('[');
    do st.chain.push_back(algebra());
    while (accept(','));
    expect(']');
  }
  void scheme(Statement& st) {
    st.kind = StmtKind::Scheme;
    declare(st, st.kind);
    expect_keyword("Spec");
    st.algebra = algebra();
    symbols_[st.name].vars = st.algebra.vars;
  }
  void morphism(Statement& st) {
    st.kind = StmtKind::Morphism;
    declare(st, st.kind);
    std::string src, tgt;
    const auto& s = use(src, {StmtKind::Scheme}, "a scheme");
    expect("->");
    use(tgt, {StmtKind::Scheme}, "a scheme");
    expect(':');
    st.refs = {src, tgt};
    st.polys = polys(s.vars);
  }
  void sieve(Statement& st) {
    st.kind = StmtKind::Sieve;
    declare(st, st.kind);
    std::string amb;
    const auto& a = use(amb, {StmtKind::Scheme}, "a scheme");
    expect(':');
    st.refs = {amb};
    st.sieve = sieve_expr(a, amb);
    symbols_[st.name].vars = a.vars;
    symbols_[st.name].ambient = amb;
  }
  void relative(Statement& st) {
    st.kind = StmtKind::Relative;
    declare(st, st.kind);
    std::string s, f;
    use(s, {StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
    expect_keyword("over");
    use(f, {StmtKind::Morphism}, "a morphism");
    st.refs = {s, f};
  }
  void simplicial(Statement& st) {
    st.kind = StmtKind::Simplicial;
    declare(st, st.kind);
    skip();
    auto col = pos_;
    st.word = ident("trivial, fiber or sym");
    if (st.word != "trivial" && st.word != "fiber" && st.word != "sym")
      error_at(col, st.word, "expected trivial, fiber or sym");
    expect('(');
    std::string s;
    use(s, {StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
    st.refs = {s};
    expect(')');
    if (accept('@')) {
      skip();
      auto c = pos_;
      long n = integer();
      if (n < 0 || n > 16) error_at(c, std::to_string(n), "skeletal level must be in 0..16");
      st.number = n;
    }
  }
  void klass(Statement& st) {
    st.kind = StmtKind::Class;
    declare(st, st.kind);
    st.cls = class_expr();
  }
  void count(Statement& st) {
    st.kind = StmtKind::Count;
    use(st.name, {StmtKind::Scheme, StmtKind::Sieve, StmtKind::Relative, StmtKind::Simplicial, StmtKind::Class},
        "countable");
    expect_keyword("at");
    std::string m;
    use(m, {StmtKind::FatPoint}, "a fat point");
    st.refs = {m};
    if (accept_keyword("level")) {
      skip();
      auto c = pos_;
      long n = integer();
      if (n < 0) error_at(c, std::to_string(n), "level must be nonnegative");
      st.number = n;
    }
  }
  void arc(Statement& st) {
    st.kind = StmtKind::Arc;
    use(st.name, {StmtKind::Scheme}, "a scheme");
    expect_keyword("at");
    std::string m;
    use(m, {StmtKind::FatPoint}, "a fat point");
    st.refs = {m};
  }
  void measure(Statement& st) {
    st.kind = StmtKind::Measure;
    use(st.name, {StmtKind::Scheme, StmtKind::Sieve}, "a scheme or sieve");
    expect_keyword("on");
    std::string c;
    use(c, {StmtKind::Chain}, "a chain");
    st.refs = {c};
    expect_keyword("Q");
    expect('=');
    st.measure.q = rational();
    if (st.measure.q < 0) error("Q must be nonnegative");
    for (;;) {
      skip();
      auto col = pos_;
      if (accept_keyword("cylinder")) {
        std::string s;
        use(s, {StmtKind::Sieve}, "a sieve");
        st.measure.cylinder = s;
      } else if (accept_keyword("lax")) {
        st.measure.lax = linear_rule();
      } else if (accept_keyword("horizon")) {
        st.measure.horizon = integer();
        if (*st.measure.horizon < 2 || *st.measure.horizon > 32) error_at(col, "horizon", "horizon must be in 2..32");
      } else if (accept_keyword("window")) {
        st.measure.window = integer();
        if (*st.measure.window < 2) error_at(col, "window", "window must be at least 2");
      } else {
        return;
      }
    }
  }
  void check(Statement& st) {
    st.kind = StmtKind::Check;
    skip();
    auto col = pos_;
    st.word = ident("a check name");
    if (std::find(kCheckNames.begin(), kCheckNames.end(), st.word) == kCheckNames.end())
      error_at(col, st.word, "unknown check '" + st.word + "'");
    auto name = [&](std::initializer_list<StmtKind> kinds, const std::string& what) {
      std::string n;
      use(n, kinds, what);
      st.refs.push_back(n);
    };
    auto at_point = [&] {
      expect_keyword("at");
      name({StmtKind::FatPoint}, "a fat point");
    };
    if (st.word == "adjunction") {
      name({StmtKind::Scheme}, "a scheme");
      name({StmtKind::FatPoint}, "a fat point");
      name({StmtKind::FatPoint}, "a fat point");
    } else if (st.word == "scissor") {
      for (int i = 0; i < 3; ++i) name({StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
    } else if (st.word == "continuity") {
      name({StmtKind::Morphism}, "a morphism");
      name({StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
      name({StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
    } else if (st.word == "tau") {
      name({StmtKind::Sieve, StmtKind::Scheme}, "a sieve or scheme");
      name({StmtKind::Simplicial}, "a simplicial sieve");
      skip();
      auto c = pos_;
      long n = integer();
      if (n < 0) error_at(c, std::to_string(n), "level must be nonnegative");
      st.number = n;
      at_point();
    } else if (st.word == "pushpull") {
      name({StmtKind::Morphism}, "a morphism");
      name({StmtKind::Relative}, "a relative sieve");
      name({StmtKind::Relative}, "a relative sieve");
      at_point();
    } else {
      name({StmtKind::Simplicial}, "a simplicial sieve");
      at_point();
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::map<std::string, Symbol>& symbols_;
  std::string pending_;
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string print_algebra(const AlgebraSpec& a) {
  if (a.vars.empty()) return "k";
  std::string s = "k[" + join(a.vars, ",") + "]";
  if (!a.relations.empty()) s += "/(" + join(a.relations, ", ") + ")";
  return s;
}

// precedence: union 1, intersection 2, leaves 3
std::string print_sieve(const SieveNode& n, int context) {
  switch (n.kind) {
    case SieveNode::Kind::Full: return "full";
    case SieveNode::Kind::Empty: return "empty";
    case SieveNode::Kind::Closed: return "V(" + join(n.polys, ", ") + ")";
    case SieveNode::Kind::Open: return "D(" + n.polys[0] + ")";
    case SieveNode::Kind::Image: return "im(" + n.ref + ")";
    case SieveNode::Kind::Ref: return n.ref;
    case SieveNode::Kind::Union:
    case SieveNode::Kind::Intersection: {
      const bool uni = n.kind == SieveNode::Kind::Union;
      const int mine = uni ? 1 : 2;
      // left-associative: the right operand needs parentheses at equal precedence
      std::string s = print_sieve(*n.left, mine) + (uni ? " | " : " & ") + print_sieve(*n.right, mine + 1);
      return context > mine ? "(" + s + ")" : s;
    }
  }
  return "";
}

// precedence: sums 1, products 2, unary minus 3, atoms 4
std::string print_class(const ClassNode& n, int context) {
  switch (n.kind) {
    case ClassNode::Kind::Integer: return std::to_string(n.value);
    case ClassNode::Kind::Lefschetz: return n.value == 1 ? "L" : "L^" + std::to_string(n.value);
    case ClassNode::Kind::Ref: return "[" + n.ref + "]";
    case ClassNode::Kind::Neg: {
      std::string s = "-" + print_class(*n.left, 3);
      return context > 3 ? "(" + s + ")" : s;
    }
    case ClassNode::Kind::Add:
    case ClassNode::Kind::Sub:
    case ClassNode::Kind::Mul: {
      const int mine = n.kind == ClassNode::Kind::Mul ? 2 : 1;
      const char* op = n.kind == ClassNode::Kind::Add ? " + " : n.kind == ClassNode::Kind::Sub ? " - " : " * ";
      std::string s = print_class(*n.left, mine) + op + print_class(*n.right, mine + 1);
      return context > mine ? "(" + s + ")" : s;
    }
  }
  return "";
}

}  // namespace

std::string to_string(const LinearRule& r) {
  std::string s;
  if (r.slope == 1) s = "n";
  else if (r.slope == -1) s = "-n";
  else if (r.slope != 0) s = std::to_string(r.slope) + "*n";
  if (r.offset != 0 || s.empty()) {
    if (s.empty()) s = std::to_string(r.offset);
    else s += (r.offset < 0 ? "-" : "+") + std::to_string(std::labs(r.offset));
  }
  return s;
}

Script parse_script(std::string_view text) {
  Script script;
  std::map<std::string, Symbol> symbols;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos)
      script.statements.push_back(LineParser(line, number, symbols).statement());
    if (end == text.size()) break;
    start = end + 1;
  }
  return script;
}

std::string print_statement(const Statement& st) {
  switch (st.kind) {
    case StmtKind::Field:
      return st.word == "Q" ? "field Q" : "field F " + st.word.substr(1);
    case StmtKind::FatPoint:
      return "fatpoint " + st.name + " = " + print_algebra(st.algebra);
    case StmtKind::Chain: {
      if (!st.word.empty()) return "chain " + st.name + " = rule " + st.word + "^n";
      std::vector<std::string> parts;
      for (const auto& a : st.chain) parts.push_back(print_algebra(a));
      return "chain " + st.name + " = [" + join(parts, ", ") + "]";
    }
    case StmtKind::Scheme:
      return "scheme " + st.name + " = Spec " + print_algebra(st.algebra);
    case StmtKind::Morphism:
      return "morphism " + st.name + " = " + st.refs[0] + " -> " + st.refs[1] + " : (" + join(st.polys, ", ") + ")";
    case StmtKind::Sieve:
      return "sieve " + st.name + " = " + st.refs[0] + " : " + print_sieve(*st.sieve, 0);
    case StmtKind::Relative:
      return "relative " + st.name + " = " + st.refs[0] + " over " + st.refs[1];
    case StmtKind::Simplicial: {
      std::string s = "simplicial " + st.name + " = " + st.word + "(" + st.refs[0] + ")";
      if (st.number) s += " @ " + std::to_string(*st.number);
      return s;
    }
    case StmtKind::Class:
      return "class " + st.name + " = " + print_class(*st.cls, 0);
    case StmtKind::Count: {
      std::string s = "count " + st.name + " at " + st.refs[0];
      if (st.number) s += " level " + std::to_string(*st.number);
      return s;
    }
    case StmtKind::Arc:
      return "arc " + st.name + " at " + st.refs[0];
    case StmtKind::Measure: {
      std::string s = "measure " + st.name + " on " + st.refs[0] + " Q=" + st.measure.q.get_str();
      if (st.measure.cylinder) s += " cylinder " + *st.measure.cylinder;
      if (st.measure.lax) s += " lax " + to_string(*st.measure.lax);
      if (st.measure.horizon) s += " horizon " + std::to_string(*st.measure.horizon);
      if (st.measure.window) s += " window " + std::to_string(*st.measure.window);
      return s;
    }
    case StmtKind::Check: {
      std::string s = "check " + st.word;
      const bool located = st.word == "tau" || st.word == "pushpull" || st.word == "topo";
      for (std::size_t i = 0; i < st.refs.size(); ++i) {
        if (located && i + 1 == st.refs.size()) {
          if (st.number) s += " " + std::to_string(*st.number);
          s += " at";
        }
        s += " " + st.refs[i];
      }
      return s;
    }
  }
  return "";
}

std::string print_script(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print_statement(st) + "\n";
  return out;
}

}  // namespace motivic
