#include "motivic/session.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "motivic/error.hpp"
#include "motivic/measure.hpp"
#include "motivic/topo.hpp"

namespace motivic {

Field parse_field(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "Q") return Field::rationals();
  if (!s.empty() && (s[0] == 'F' || s[0] == 'f')) s = s.substr(1);
  if (s.empty() || s.size() > 5 || s.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::InvalidArgument, "field must be Q or F p, got '" + std::string(text) + "'");
  unsigned long p = std::stoul(s);
  if (p < 2 || p >= 65536 || !is_prime(static_cast<std::uint32_t>(p)))
    fail(ErrorKind::InvalidArgument, "F p needs a prime p < 65536");
  return Field::prime(static_cast<std::uint32_t>(p));
}

std::string Record::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return {};
}

std::string Report::text() const {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    for (const auto& [k, v] : records[i].fields) {
      std::string flat = v;
      for (auto& c : flat)
        if (c == '\n') c = ' ';
      out += k + "=" + flat + "\n";
    }
  }
  return out;
}

namespace {

struct MissingDependency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Entity = std::variant<FatPointPtr, PointSystem, SchemePtr, Morphism, SieveExpr, RelativeSieve, SimplicialSieve,
                            KClass>;

std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

class Session {
 public:
  Session(const Script& script, const Config& config) : script_(script), config_(config) {
    caps_.max_candidates = config.max_candidates;
    field_ = Field::prime(2);
    for (const auto& st : script.statements)
      if (st.kind == StmtKind::Field) {
        field_ = parse_field(st.word);
        break;
      }
    if (config.field) field_ = *config.field;
    if (field_.is_finite())
      for (std::size_t n = 1; n <= config.battery_size; ++n)
        battery_.push_back(std::make_shared<const FatPoint>(FatPoint::jet(field_, static_cast<unsigned>(n))));
  }

  Report run() {
    Report report;
    bool error = false, failed = false;
    for (std::size_t i = 0; i < script_.statements.size(); ++i) {
      const auto& st = script_.statements[i];
      Record r;
      r.add("stmt", std::to_string(i + 1));
      r.add("line", std::to_string(st.line));
      r.add("kind", to_string(st.kind));
      if (!st.name.empty()) r.add("name", st.name);
      try {
        std::string verdict = evaluate(st, r);
        r.add("verdict", verdict);
        if (verdict == "fail") failed = true;
      } catch (const Error& e) {
        r.add("verdict", "error");
        r.add("error", to_string(e.kind()));
        r.add("message", e.what());
        error = true;
      } catch (const MissingDependency& e) {
        r.add("verdict", "error");
        r.add("error", "Dependency");
        r.add("message", e.what());
        error = true;
      }
      report.records.push_back(std::move(r));
    }
    report.exit = error ? ExitCode::EvaluationError : failed ? ExitCode::CheckFailure : ExitCode::Ok;
    return report;
  }

 private:
  // ---- environment

  template <class T>
  const T& get(const std::string& name) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw MissingDependency("'" + name + "' is undefined because its declaration failed");
    if (auto p = std::get_if<T>(&it->second)) return *p;
    fail(ErrorKind::InvalidArgument, "'" + name + "' has the wrong kind here");
  }
  SieveExpr as_sieve(const std::string& name) const {
    auto it = env_.find(name);
    if (it != env_.end())
      if (auto x = std::get_if<SchemePtr>(&it->second)) return SieveExpr::full(*x);
    return get<SieveExpr>(name);
  }
  FatPointPtr point(const std::string& name) const { return get<FatPointPtr>(name); }

  Ideal ideal(const AlgebraSpec& a) const {
    PolyRing ring(field_, a.vars);
    std::vector<Poly> gens;
    for (const auto& p : a.relations) gens.push_back(parse_poly(p, ring));
    return Ideal(ring, std::move(gens));
  }
  FatPointPtr fat_point(const AlgebraSpec& a) const {
    if (a.vars.empty()) return std::make_shared<const FatPoint>(FatPoint::spec_k(field_));
    return std::make_shared<const FatPoint>(FatPoint::make(ideal(a), caps_));
  }

  SieveExpr sieve(const SieveNode& n, const SchemePtr& amb) const {
    auto polys = [&] {
      std::vector<Poly> out;
      for (const auto& p : n.polys) out.push_back(parse_poly(p, amb->ring()));
      return out;
    };
    switch (n.kind) {
      case SieveNode::Kind::Full: return SieveExpr::full(amb);
      case SieveNode::Kind::Empty: return SieveExpr::empty(amb);
      case SieveNode::Kind::Closed: return SieveExpr::closed(amb, polys());
      case SieveNode::Kind::Open: return SieveExpr::open(amb, polys()[0]);
      case SieveNode::Kind::Image: {
        const auto& f = get<Morphism>(n.ref);
        require_same_ambient(f.target(), amb, "image leaf");
        return SieveExpr::image(f);
      }
      case SieveNode::Kind::Ref: return get<SieveExpr>(n.ref);
      case SieveNode::Kind::Union: return sieve(*n.left, amb) | sieve(*n.right, amb);
      case SieveNode::Kind::Intersection: return sieve(*n.left, amb) & sieve(*n.right, amb);
    }
    fail(ErrorKind::InvalidArgument, "bad sieve");
  }

  KClass klass(const ClassNode& n) const {
    switch (n.kind) {
      case ClassNode::Kind::Integer: return KClass::integer(n.value);
      case ClassNode::Kind::Lefschetz: return KClass::lefschetz(n.value);
      case ClassNode::Kind::Ref: {
        auto it = env_.find(n.ref);
        if (it == env_.end()) throw MissingDependency("'" + n.ref + "' is undefined because its declaration failed");
        if (auto x = std::get_if<SchemePtr>(&it->second)) return KClass::of(*x);
        if (auto s = std::get_if<SieveExpr>(&it->second)) return KClass::of(*s);
        if (auto r = std::get_if<RelativeSieve>(&it->second)) return KClass::of(*r);
        return get<KClass>(n.ref);
      }
      case ClassNode::Kind::Add: return klass(*n.left) + klass(*n.right);
      case ClassNode::Kind::Sub: return klass(*n.left) - klass(*n.right);
      case ClassNode::Kind::Mul: return klass(*n.left) * klass(*n.right);
      case ClassNode::Kind::Neg: return -klass(*n.left);
    }
    fail(ErrorKind::InvalidArgument, "bad class");
  }

  // ---- statements

  std::string evaluate(const Statement& st, Record& r) {
    switch (st.kind) {
      case StmtKind::Field: {
        r.add("value", field_.to_string());
        if (config_.field && parse_field(st.word) != *config_.field) r.add("note", "overridden by --field");
        return "ok";
      }
      case StmtKind::FatPoint: {
        auto m = fat_point(st.algebra);
        r.add("value", m->to_string());
        r.add("length", std::to_string(m->length()));
        env_.emplace(st.name, m);
        return "ok";
      }
      case StmtKind::Chain: return chain(st, r);
      case StmtKind::Scheme: {
        auto x = st.algebra.vars.empty()
                     ? std::make_shared<const AffineScheme>(st.name, AffineScheme::spec_k(field_).presentation())
                     : std::make_shared<const AffineScheme>(AffineScheme::make(st.name, ideal(st.algebra), caps_));
        r.add("value", x->to_string());
        env_.emplace(st.name, x);
        return "ok";
      }
      case StmtKind::Morphism: {
        const auto& src = get<SchemePtr>(st.refs[0]);
        const auto& tgt = get<SchemePtr>(st.refs[1]);
        std::vector<Poly> images;
        for (const auto& p : st.polys) images.push_back(parse_poly(p, src->ring()));
        Morphism f(src, tgt, std::move(images));
        r.add("value", f.to_string());
        env_.emplace(st.name, f);
        return "ok";
      }
      case StmtKind::Sieve: {
        auto s = sieve(*st.sieve, get<SchemePtr>(st.refs[0]));
        r.add("value", s.to_string());
        env_.emplace(st.name, s);
        return "ok";
      }
      case StmtKind::Relative: {
        RelativeSieve rel(as_sieve(st.refs[0]), get<Morphism>(st.refs[1]));
        r.add("value", rel.sieve.to_string() + " over " + rel.base()->name());
        env_.emplace(st.name, rel);
        return "ok";
      }
      case StmtKind::Simplicial: {
        auto tag = st.word == "trivial" ? FunctorTag::Trivial : st.word == "fiber" ? FunctorTag::Fiber
                                                                                      : FunctorTag::Symmetric;
        std::size_t top = st.number ? static_cast<std::size_t>(*st.number) : config_.skeletal_level;
        auto s = SimplicialSieve::functor(tag, as_sieve(st.refs[0]), top);
        r.add("value", std::string(to_string(tag)) + "(" + st.refs[0] + ")");
        r.add("top_level", std::to_string(top));
        env_.emplace(st.name, s);
        return "ok";
      }
      case StmtKind::Class: {
        auto c = klass(*st.cls);
        r.add("value", c.to_string());
        env_.emplace(st.name, c);
        return "ok";
      }
      case StmtKind::Count: return count(st, r);
      case StmtKind::Arc: {
        const auto& x = get<SchemePtr>(st.name);
        auto m = point(st.refs[0]);
        auto arc = weil_restrict(x, m, caps_);
        r.add("value", arc.scheme->to_string());
        r.add("coordinates", std::to_string(arc.scheme->dimension_of_ambient()));
        r.add("dimension", std::to_string(arc_dimension(x, m, caps_)));
        return "ok";
      }
      case StmtKind::Measure: return measure(st, r);
      case StmtKind::Check: return check(st, r);
    }
    return "ok";
  }

  std::string chain(const Statement& st, Record& r) {
    if (!st.word.empty()) {
      if (st.word != "t") fail(ErrorKind::InvalidArgument, "jet rules are written in t");
      auto system = PointSystem::jets(field_, st.word);
      r.add("value", system.description());
      env_.emplace(st.name, system);
      return "ok";
    }
    std::vector<FatPointPtr> members;
    std::vector<std::string> shown;
    for (const auto& a : st.chain) {
      members.push_back(fat_point(a));
      shown.push_back(members.back()->to_string());
    }
    auto system = PointSystem::explicit_chain(members);
    auto ok = chain_check(system, members.size());
    if (!ok.ok)
      fail(ErrorKind::ChainFailure, "member " + std::to_string(ok.index + 1) + " is not a quotient of member " +
                                        std::to_string(ok.index + 2) + " (generator " + ok.generator + ")");
    r.add("value", "[" + join(shown) + "]");
    env_.emplace(st.name, system);
    return "ok";
  }

  std::string count(const Statement& st, Record& r) {
    auto m = point(st.refs[0]);
    const auto& name = st.name;
    auto it = env_.find(name);
    if (it == env_.end()) throw MissingDependency("'" + name + "' is undefined because its declaration failed");
    const auto& e = it->second;
    if (st.number && !std::holds_alternative<SimplicialSieve>(e))
      fail(ErrorKind::InvalidArgument, "level applies to simplicial sieves only");
    if (auto x = std::get_if<SchemePtr>(&e)) r.add("value", std::to_string(count_of(SieveExpr::full(*x), m)));
    else if (auto s = std::get_if<SieveExpr>(&e)) r.add("value", std::to_string(count_of(*s, m)));
    else if (auto rel = std::get_if<RelativeSieve>(&e)) {
      auto v = fiber_counts(*rel, m, caps_);
      std::vector<std::string> parts;
      std::uint64_t total = 0;
      for (auto c : v) {
        parts.push_back(std::to_string(c));
        total += c;
      }
      r.add("value", "[" + join(parts) + "]");
      r.add("total", std::to_string(total));
    } else if (auto ss = std::get_if<SimplicialSieve>(&e)) {
      std::size_t n = st.number ? static_cast<std::size_t>(*st.number) : 0;
      if (n > ss->top_level()) fail(ErrorKind::LevelOutOfRange, "level beyond the skeletal level");
      r.add("level", std::to_string(n));
      r.add("value", std::to_string(level_count(*ss, m, n, caps_)));
    } else if (auto c = std::get_if<KClass>(&e)) {
      if (c->base()) {
        std::vector<std::string> parts;
        for (const auto& v : counting_vector(*c, m, caps_)) parts.push_back(v.get_str());
        r.add("value", "[" + join(parts) + "]");
      } else {
        auto v = counting_hom(*c, m, caps_);
        r.add("value", v.get_str());
        r.add("integral", v.get_den() == 1 ? "yes" : "no");
      }
    } else {
      fail(ErrorKind::InvalidArgument, "'" + name + "' cannot be counted");
    }
    return "ok";
  }

  std::uint64_t count_of(const SieveExpr& s, const FatPointPtr& m) const { return motivic::count(s, m, caps_); }

  std::string measure(const Statement& st, Record& r) {
    const auto& spec = st.measure;
    auto base = as_sieve(st.name);
    const auto& system = get<PointSystem>(st.refs[0]);
    std::optional<SieveExpr> cyl;
    if (spec.cylinder) {
      cyl = get<SieveExpr>(*spec.cylinder);
      require_same_ambient(cyl->ambient(), base.ambient(), "cylinder");
    }
    Caps caps = caps_;
    LimitSieve subject = cyl ? LimitSieve(base, system,
                                          [cyl = *cyl, base, caps](std::size_t, const ArcScheme& arc) {
                                            return arc_sieve(base, arc, caps) & constant_terms(arc, cyl);
                                          },
                                          "cylinder over " + cyl->to_string())
                             : LimitSieve::full_arcs(base, system);
    MeasureQuery q(subject);
    q.q = spec.q;
    q.horizon = spec.horizon ? static_cast<std::size_t>(*spec.horizon) : config_.horizon;
    q.window = spec.window ? static_cast<std::size_t>(*spec.window) : config_.window;
    q.battery = battery_;
    q.caps = caps_;
    MeasureReport rep;
    if (spec.lax) {
      auto rule = *spec.lax;
      for (std::size_t pos = 0; pos < q.horizon; ++pos) {
        long label = static_cast<long>(system.label(pos));
        if (rule.slope * label + rule.offset < 0)
          fail(ErrorKind::InvalidArgument, "lax exponent is negative at label " + std::to_string(label));
      }
      q.lax = [rule](std::size_t label) { return rule.slope * static_cast<long>(label) + rule.offset; };
      q.lax_description = "l(n) = " + to_string(rule);
      rep = lax_measure(q);
    } else {
      rep = limit_measure(q);
    }
    r.add("mode", to_string(rep.mode));
    r.add("q", spec.q.get_str());
    r.add("horizon", std::to_string(q.horizon));
    r.add("window", std::to_string(q.window));
    if (!rep.lax.empty()) r.add("lax", rep.lax);
    std::vector<std::string> terms;
    for (const auto& t : rep.sequence) terms.push_back(t.value.to_string());
    r.add("terms", "[" + join(terms, "; ") + "]");
    r.add("value", rep.verdict());
    return rep.stabilized ? "stabilized" : "indeterminate";
  }

  // Arcs whose constant coefficients lie in s.
  static SieveExpr constant_terms(const ArcScheme& arc, const SieveExpr& s) {
    const std::size_t len = arc.point->length();
    std::vector<Poly> images;
    for (std::size_t i = 0; i < s.ambient()->dimension_of_ambient(); ++i)
      images.push_back(Poly::variable(arc.scheme->ring(), i * len));
    return pullback(arc.scheme, images, s);
  }

  std::string check(const Statement& st, Record& r) {
    r.add("check", st.word);
    if (st.word == "adjunction") {
      auto v = adjunction_check(get<SchemePtr>(st.refs[0]), point(st.refs[1]), point(st.refs[2]), caps_);
      r.add("product_side", std::to_string(v.product_side));
      r.add("arc_side", std::to_string(v.arc_side));
      r.add("bijection", v.bijection ? "yes" : "no");
      return v.holds() ? "pass" : "fail";
    }
    if (st.word == "scissor") return scissor(st, r);
    if (st.word == "continuity") return continuity(st, r);
    if (st.word == "tau") {
      auto v = tau_adjunction_check(as_sieve(st.refs[0]), get<SimplicialSieve>(st.refs[1]),
                                    static_cast<std::size_t>(*st.number), point(st.refs[2]), caps_);
      return hom_verdict(v, r);
    }
    if (st.word == "pushpull") {
      auto v = pushpull_adjunction_check(get<Morphism>(st.refs[0]), get<RelativeSieve>(st.refs[1]),
                                         get<RelativeSieve>(st.refs[2]), point(st.refs[3]), caps_);
      return hom_verdict(v, r);
    }
    auto a = evaluate_to_sset(get<SimplicialSieve>(st.refs[0]), point(st.refs[1]), caps_);
    auto inv = invariants(a, caps_);
    std::vector<std::string> groups;
    long alternating = 0;
    for (std::size_t n = 0; n < inv.homology.size(); ++n) {
      groups.push_back(inv.homology[n].to_string());
      alternating += (n % 2 ? -1L : 1L) * static_cast<long>(inv.homology[n].rank);
    }
    r.add("components", std::to_string(inv.components));
    r.add("euler", std::to_string(inv.euler));
    r.add("homology", "[" + join(groups) + "]");
    r.add("key", inv.key());
    r.add("note", "equal keys are necessary, not sufficient, for homotopy equivalence");
    return alternating == inv.euler ? "pass" : "fail";
  }

  static std::string hom_verdict(const HomVerdict& v, Record& r) {
    r.add("left", std::to_string(v.left));
    r.add("right", std::to_string(v.right));
    r.add("mutual_inverse", v.mutual_inverse ? "yes" : "no");
    if (!v.detail.empty()) r.add("detail", v.detail);
    return v.holds() ? "pass" : "fail";
  }

  std::string scissor(const Statement& st, Record& r) {
    auto x = as_sieve(st.refs[0]), a = as_sieve(st.refs[1]), b = as_sieve(st.refs[2]);
    require_same_ambient(x.ambient(), a.ambient(), "scissor check");
    require_same_ambient(a.ambient(), b.ambient(), "scissor check");
    if (battery_.empty()) fail(ErrorKind::InfiniteField, "the scissor check counts points over a finite field");
    auto ab = a & b;
    std::string verdict = "pass";
    std::vector<std::string> seen;
    for (const auto& m : battery_) {
      auto lhs = count_of(x, m);
      long rhs = static_cast<long>(count_of(a, m)) + static_cast<long>(count_of(b, m)) -
                 static_cast<long>(count_of(ab, m));
      seen.push_back(std::to_string(lhs));
      if (static_cast<long>(lhs) != rhs && verdict == "pass") {
        verdict = "fail";
        r.add("counterexample", "at " + m->to_string() + ": |" + st.refs[0] + "| = " + std::to_string(lhs) +
                                    " but |" + st.refs[1] + "| + |" + st.refs[2] + "| - |" + st.refs[1] + " & " +
                                    st.refs[2] + "| = " + std::to_string(rhs));
      }
    }
    r.add("counts", "[" + join(seen) + "]");
    bool equal = KClass::of(x) == KClass::of(a) + KClass::of(b) - KClass::of(ab);
    r.add("normal_form", equal ? "equal" : "different");
    return verdict;
  }

  std::string continuity(const Statement& st, Record& r) {
    const auto& f = get<Morphism>(st.refs[0]);
    auto source = as_sieve(st.refs[1]), target = as_sieve(st.refs[2]);
    if (battery_.empty()) fail(ErrorKind::InfiniteField, "the continuity probe needs a finite field");
    std::mt19937_64 rng(config_.seed);
    const auto& tgt = target.ambient();
    const std::uint64_t p = field_.characteristic();
    std::vector<std::pair<FatPointPtr, SieveExpr>> entries;
    std::vector<std::string> opens;
    for (const auto& m : battery_)
      for (int k = 0; k < 2; ++k) {
        Poly g = Poly::constant(tgt->ring(), 1);
        if (tgt->dimension_of_ambient() > 0) {
          auto j = static_cast<std::size_t>(rng() % tgt->dimension_of_ambient());
          auto c = static_cast<long>(rng() % p);
          g = Poly::variable(tgt->ring(), j) - Poly::constant(tgt->ring(), c);
        }
        entries.emplace_back(m, target & SieveExpr::open(tgt, g));
        opens.push_back("D(" + g.to_string() + ")");
      }
    auto v = continuity_probe(f, source, target, entries, caps_);
    r.add("opens", "[" + join(opens) + "]");
    r.add("battery", std::to_string(entries.size()));
    if (!v.pass) {
      r.add("failing_entry", std::to_string(v.failing_entry + 1));
      r.add("counterexample", v.counterexample);
    }
    r.add("note", "checked on a finite battery only");
    return v.pass ? "pass" : "fail";
  }

  const Script& script_;
  const Config& config_;
  Field field_ = Field::rationals();
  Caps caps_;
  std::vector<FatPointPtr> battery_;
  std::map<std::string, Entity> env_;
};

}  // namespace

Report run(const Script& script, const Config& config) { return Session(script, config).run(); }

Report run_text(std::string_view text, const Config& config) {
  Script script;
  try {
    script = parse_script(text);
  } catch (const ParseError& e) {
    Report report;
    Record r;
    r.add("kind", "parse-error");
    r.add("line", std::to_string(e.line));
    r.add("column", std::to_string(e.column));
    r.add("token", e.token);
    r.add("message", e.what());
    r.add("verdict", "error");
    report.records.push_back(std::move(r));
    report.exit = ExitCode::ParseError;
    return report;
  }
  return run(script, config);
}

}  // namespace motivic
