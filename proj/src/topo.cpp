#include "motivic/topo.hpp"

#include <numeric>

namespace motivic {

namespace {

using Sequence = std::vector<std::size_t>;

// Simplicial set of sequences closed under deleting and repeating entries.
FiniteSimplicialSet from_sequences(const std::vector<std::vector<Sequence>>& levels) {
  std::vector<std::size_t> sizes;
  std::vector<std::map<Sequence, std::size_t>> index(levels.size());
  std::vector<std::vector<std::string>> labels(levels.size());
  for (std::size_t n = 0; n < levels.size(); ++n) {
    sizes.push_back(levels[n].size());
    for (std::size_t x = 0; x < levels[n].size(); ++x) {
      index[n][levels[n][x]] = x;
      std::string s = "(";
      for (std::size_t i = 0; i < levels[n][x].size(); ++i) s += (i ? "," : "") + std::to_string(levels[n][x][i]);
      labels[n].push_back(s + ")");
    }
  }
  std::vector<std::vector<FiniteSimplicialSet::Map>> faces(levels.size()), degens(levels.size());
  for (std::size_t n = 0; n < levels.size(); ++n)
    for (std::size_t i = 0; i <= n; ++i) {
      if (n > 0) {
        FiniteSimplicialSet::Map d;
        for (const auto& seq : levels[n]) {
          Sequence t = seq;
          t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
          d.push_back(index[n - 1].at(t));
        }
        faces[n].push_back(std::move(d));
      }
      if (n + 1 < levels.size()) {
        FiniteSimplicialSet::Map s;
        for (const auto& seq : levels[n]) {
          Sequence t = seq;
          t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), seq[i]);
          s.push_back(index[n + 1].at(t));
        }
        degens[n].push_back(std::move(s));
      }
    }
  return FiniteSimplicialSet(std::move(sizes), std::move(faces), std::move(degens), std::move(labels));
}

std::vector<std::vector<Sequence>> nondecreasing(std::size_t k, std::size_t top, bool boundary) {
  std::vector<std::vector<Sequence>> levels(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    Sequence seq(n + 1, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t lo) {
      if (pos == seq.size()) {
        if (boundary) {
          std::set<std::size_t> seen(seq.begin(), seq.end());
          if (seen.size() == k + 1) return;
        }
        levels[n].push_back(seq);
        return;
      }
      for (std::size_t v = lo; v <= k; ++v) {
        seq[pos] = v;
        rec(pos + 1, v);
      }
    };
    rec(0, 0);
  }
  return levels;
}

}  // namespace

FiniteSimplicialSet::FiniteSimplicialSet(std::vector<std::size_t> sizes, std::vector<std::vector<Map>> faces,
                                         std::vector<std::vector<Map>> degeneracies,
                                         std::vector<std::vector<std::string>> labels)
    : sizes_(std::move(sizes)), faces_(std::move(faces)), degeneracies_(std::move(degeneracies)),
      labels_(std::move(labels)) {
  const std::size_t levels = sizes_.size();
  if (levels == 0) fail(ErrorKind::InvalidArgument, "simplicial set needs a level");
  faces_.resize(levels);
  degeneracies_.resize(levels);
  if (labels_.empty()) {
    labels_.resize(levels);
    for (std::size_t n = 0; n < levels; ++n)
      for (std::size_t x = 0; x < sizes_[n]; ++x) labels_[n].push_back(std::to_string(x));
  }
  auto bad = [](const std::string& what) { fail(ErrorKind::InvalidArgument, "simplicial identity fails: " + what); };
  for (std::size_t n = 0; n < levels; ++n) {
    if (n > 0 && faces_[n].size() != n + 1) bad("wrong number of faces at level " + std::to_string(n));
    if (n + 1 < levels && degeneracies_[n].size() != n + 1)
      bad("wrong number of degeneracies at level " + std::to_string(n));
    for (const auto& d : faces_[n])
      for (auto y : d)
        if (d.size() != sizes_[n] || y >= sizes_[n - 1]) bad("face out of range at level " + std::to_string(n));
    for (const auto& s : degeneracies_[n])
      for (auto y : s)
        if (s.size() != sizes_[n] || y >= sizes_[n + 1]) bad("degeneracy out of range at level " + std::to_string(n));
  }
  for (std::size_t n = 0; n < levels; ++n)
    for (std::size_t x = 0; x < sizes_[n]; ++x) {
      if (n >= 2)
        for (std::size_t j = 1; j <= n; ++j)
          for (std::size_t i = 0; i < j; ++i)
            if (face(n - 1, i, face(n, j, x)) != face(n - 1, j - 1, face(n, i, x))) bad("d_i d_j at level " + std::to_string(n));
      if (n + 1 < levels)
        for (std::size_t j = 0; j <= n; ++j) {
          const std::size_t y = degeneracy(n, j, x);
          for (std::size_t i = 0; i <= n + 1; ++i) {
            const std::size_t lhs = face(n + 1, i, y);
            std::size_t rhs;
            if (i == j || i == j + 1) rhs = x;
            else if (i < j) rhs = degeneracy(n - 1, j - 1, face(n, i, x));
            else rhs = degeneracy(n - 1, j, face(n, i - 1, x));
            if (lhs != rhs) bad("d_i s_j at level " + std::to_string(n));
          }
        }
      if (n + 2 < levels)
        for (std::size_t j = 0; j <= n; ++j)
          for (std::size_t i = 0; i <= j; ++i)
            if (degeneracy(n + 1, i, degeneracy(n, j, x)) != degeneracy(n + 1, j + 1, degeneracy(n, i, x)))
              bad("s_i s_j at level " + std::to_string(n));
    }
}

FiniteSimplicialSet FiniteSimplicialSet::standard_simplex(std::size_t k, std::size_t top_level) {
  return from_sequences(nondecreasing(k, top_level, false));
}

FiniteSimplicialSet FiniteSimplicialSet::boundary_simplex(std::size_t k, std::size_t top_level) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "the boundary of a point is empty");
  return from_sequences(nondecreasing(k, top_level, true));
}

FiniteSimplicialSet FiniteSimplicialSet::discrete(std::size_t points, std::size_t top_level) {
  std::vector<std::vector<Sequence>> levels(top_level + 1);
  for (std::size_t n = 0; n <= top_level; ++n)
    for (std::size_t p = 0; p < points; ++p) levels[n].push_back(Sequence(n + 1, p));
  return from_sequences(levels);
}

FiniteSimplicialSet FiniteSimplicialSet::disjoint_union(const FiniteSimplicialSet& a, const FiniteSimplicialSet& b) {
  const std::size_t levels = std::min(a.sizes_.size(), b.sizes_.size());
  std::vector<std::size_t> sizes;
  std::vector<std::vector<Map>> faces(levels), degens(levels);
  std::vector<std::vector<std::string>> labels(levels);
  for (std::size_t n = 0; n < levels; ++n) {
    sizes.push_back(a.sizes_[n] + b.sizes_[n]);
    for (std::size_t x = 0; x < a.sizes_[n]; ++x) labels[n].push_back("a" + a.labels_[n][x]);
    for (std::size_t x = 0; x < b.sizes_[n]; ++x) labels[n].push_back("b" + b.labels_[n][x]);
    auto join = [](const Map& f, const Map& g, std::size_t offset) {
      Map h = f;
      for (auto y : g) h.push_back(y + offset);
      return h;
    };
    if (n > 0)
      for (std::size_t i = 0; i <= n; ++i) faces[n].push_back(join(a.faces_[n][i], b.faces_[n][i], a.sizes_[n - 1]));
    if (n + 1 < levels)
      for (std::size_t i = 0; i <= n; ++i)
        degens[n].push_back(join(a.degeneracies_[n][i], b.degeneracies_[n][i], a.sizes_[n + 1]));
  }
  return FiniteSimplicialSet(std::move(sizes), std::move(faces), std::move(degens), std::move(labels));
}

std::vector<std::size_t> FiniteSimplicialSet::nondegenerate(std::size_t n) const {
  std::vector<bool> hit(size(n), false);
  if (n > 0)
    for (const auto& s : degeneracies_[n - 1])
      for (auto y : s) hit[y] = true;
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < size(n); ++x)
    if (!hit[x]) out.push_back(x);
  return out;
}

FiniteSimplicialSet evaluate_to_sset(const SimplicialSieve& s, const FatPointPtr& m, const Caps& caps) {
  if (s.symmetric) fail(ErrorKind::Unsupported, "symmetric sieves carry no face maps");
  FpAlgebra alg(m->algebra());
  const std::size_t top = s.top_level();
  std::vector<std::vector<FlatPoint>> pts;
  std::vector<std::map<FlatPoint, std::size_t>> index(top + 1);
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::string>> labels(top + 1);
  const std::size_t d = alg.dimension();
  for (std::size_t n = 0; n <= top; ++n) {
    pts.push_back(flat_points(s.levels[n], m, caps));
    sizes.push_back(pts[n].size());
    for (std::size_t x = 0; x < pts[n].size(); ++x) {
      index[n][pts[n][x]] = x;
      SchemePoint p{m, {}};
      for (std::size_t v = 0; v < s.levels[n].ambient()->ring().size(); ++v)
        p.images.push_back(alg.to_element(std::span<const std::uint32_t>(pts[n][x]).subspan(v * d, d)));
      labels[n].push_back(to_string(p));
    }
  }
  auto induced = [&](const Morphism& f, std::size_t from, std::size_t to, const std::string& what) {
    PointMap map(f, alg);
    FiniteSimplicialSet::Map out;
    for (const auto& p : pts[from]) {
      auto it = index[to].find(map(p));
      if (it == index[to].end())
        fail(ErrorKind::Incompatible, what + " sends a member of level " + std::to_string(from) + " outside level " +
                                          std::to_string(to));
      out.push_back(it->second);
    }
    return out;
  };
  std::vector<std::vector<FiniteSimplicialSet::Map>> faces(top + 1), degens(top + 1);
  for (std::size_t n = 0; n <= top; ++n)
    for (std::size_t i = 0; i <= n; ++i) {
      if (n > 0) faces[n].push_back(induced(s.ambient.faces[n][i], n, n - 1, "d_" + std::to_string(i)));
      if (n < top) degens[n].push_back(induced(s.ambient.degeneracies[n][i], n, n + 1, "s_" + std::to_string(i)));
    }
  return FiniteSimplicialSet(std::move(sizes), std::move(faces), std::move(degens), std::move(labels));
}

std::string HomologyGroup::to_string() const {
  std::vector<std::string> parts;
  if (rank == 1) parts.push_back("Z");
  else if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
  for (const auto& t : torsion) parts.push_back("Z/" + t.get_str());
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

std::string RealizationInvariants::key() const {
  std::string s = "components=" + std::to_string(components) + ";chi=" + std::to_string(euler) + ";H=[";
  for (std::size_t n = 0; n < homology.size(); ++n) s += (n ? ", " : "") + homology[n].to_string();
  return s + "]";
}

SmithForm smith_normal_form(std::vector<std::vector<Integer>> a) {
  SmithForm out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<Integer> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry in the remaining block
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (!piv || abs(a[i][j]) < abs(a[piv->first][piv->second]))) piv = {i, j};
    if (!piv) break;
    std::swap(a[t], a[piv->first]);
    for (auto& row : a) std::swap(row[t], row[piv->second]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  // make the diagonal a divisor chain
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      Integer g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      diag[i] = g;
      diag[j] = l;
    }
  out.rank = diag.size();
  out.factors = std::move(diag);
  return out;
}

RealizationInvariants invariants(const FiniteSimplicialSet& a, const Caps& caps) {
  RealizationInvariants inv;
  const std::size_t top = a.top_level();
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::map<std::size_t, std::size_t>> position(top + 1);
  std::size_t total = 0;
  for (std::size_t n = 0; n <= top; ++n) {
    cells.push_back(a.nondegenerate(n));
    for (std::size_t k = 0; k < cells[n].size(); ++k) position[n][cells[n][k]] = k;
    total += cells[n].size();
    inv.euler += (n % 2 ? -1L : 1L) * static_cast<long>(cells[n].size());
  }
  if (total > caps.max_cells) fail(ErrorKind::CapExceeded, "more than " + std::to_string(caps.max_cells) + " cells");

  std::vector<std::size_t> parent(a.size(0));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  if (top >= 1)
    for (std::size_t x = 0; x < a.size(1); ++x) parent[root(a.face(1, 0, x))] = root(a.face(1, 1, x));
  for (std::size_t v = 0; v < parent.size(); ++v) inv.components += root(v) == v;

  // boundary n : C_n -> C_{n-1} on normalized chains
  std::vector<SmithForm> forms(top + 2);
  for (std::size_t n = 1; n <= top; ++n) {
    std::vector<std::vector<Integer>> m(cells[n - 1].size(), std::vector<Integer>(cells[n].size(), 0));
    for (std::size_t k = 0; k < cells[n].size(); ++k)
      for (std::size_t i = 0; i <= n; ++i) {
        auto it = position[n - 1].find(a.face(n, i, cells[n][k]));
        if (it == position[n - 1].end()) continue;
        m[it->second][k] += (i % 2 ? -1 : 1);
      }
    forms[n] = smith_normal_form(std::move(m));
  }
  for (std::size_t n = 0; n <= top; ++n) {
    HomologyGroup h;
    h.rank = cells[n].size() - forms[n].rank - forms[n + 1].rank;
    for (const auto& f : forms[n + 1].factors)
      if (f > 1) h.torsion.push_back(f);
    inv.homology.push_back(std::move(h));
  }
  return inv;
}

std::string homotopy_class_key(const FiniteSimplicialSet& a, const Caps& caps) { return invariants(a, caps).key(); }

PreservationVerdict preservation_check(const SimplicialSieve& a, const SimplicialSieve& b, const FatPointPtr& m,
                                       const Caps& caps) {
  PreservationVerdict v;
  const std::size_t top = std::min(a.top_level(), b.top_level());
  auto level_set = [&](const SimplicialSieve& s, std::size_t n) {
    auto pts = flat_points(s.levels[n], m, caps);
    return std::set<FlatPoint>(pts.begin(), pts.end());
  };
  auto fail_at = [&](const std::string& what, std::size_t n) {
    if (v.pass) v.detail = what + " differs at level " + std::to_string(n);
    v.pass = false;
  };
  const bool same = a.ambient.levels[0]->same_as(*b.ambient.levels[0]);
  std::optional<SimplicialSieve> u, i;
  if (same) {
    u = a | b;
    i = a & b;
  }
  auto p = product(a, b);
  for (std::size_t n = 0; n <= top; ++n) {
    auto sa = level_set(a, n), sb = level_set(b, n);
    if (same) {
      std::set<FlatPoint> uu, ii;
      std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uu, uu.end()));
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(ii, ii.end()));
      if (level_set(*u, n) != uu) fail_at("union", n);
      if (level_set(*i, n) != ii) fail_at("intersection", n);
    }
    std::set<FlatPoint> pp;
    for (const auto& x : sa)
      for (const auto& y : sb) {
        FlatPoint z = x;
        z.insert(z.end(), y.begin(), y.end());
        pp.insert(std::move(z));
      }
    if (level_set(p, n) != pp) fail_at("product", n);
  }
  if (!v.pass) return v;
  // faces of the product act factorwise
  FpAlgebra alg(m->algebra());
  for (std::size_t n = 1; n <= top && v.pass; ++n) {
    auto sa = flat_points(a.levels[n], m, caps), sb = flat_points(b.levels[n], m, caps);
    for (std::size_t i = 0; i <= n && v.pass; ++i) {
      PointMap fa(a.ambient.faces[n][i], alg), fb(b.ambient.faces[n][i], alg), fp(p.ambient.faces[n][i], alg);
      for (const auto& x : sa)
        for (const auto& y : sb) {
          FlatPoint z = x;
          z.insert(z.end(), y.begin(), y.end());
          FlatPoint want = fa(x);
          auto fy = fb(y);
          want.insert(want.end(), fy.begin(), fy.end());
          if (fp(z) != want) fail_at("product face d_" + std::to_string(i), n);
        }
    }
  }
  return v;
}

SimplicialSieve nerve_sieve(const SchemePtr& x, const std::vector<std::vector<long>>& points,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t top_level) {
  const std::size_t d = x->ring().size();
  for (const auto& p : points)
    if (p.size() != d) fail(ErrorKind::InvalidArgument, "point of the wrong dimension");
  for (const auto& [p, q] : relation)
    if (p >= points.size() || q >= points.size()) fail(ErrorKind::InvalidArgument, "relation on unknown points");
  auto fib = SimplicialSieve::fiber(SieveExpr::full(x), top_level);
  std::vector<SieveExpr> levels;
  for (std::size_t n = 0; n <= top_level; ++n) {
    const SchemePtr& amb = fib.ambient.levels[n];
    const PolyRing& ring = amb->ring();
    auto at = [&](std::size_t block, std::size_t point, std::vector<Poly>& eqs) {
      for (std::size_t j = 0; j < d; ++j)
        eqs.push_back(Poly::variable(ring, block * d + j) - Poly::constant(ring, Scalar(points[point][j])));
    };
    SieveExpr level = SieveExpr::full(amb);
    if (n == 0) {
      level = SieveExpr::empty(amb);
      std::set<std::size_t> used;
      for (const auto& [p, q] : relation) used.insert({p, q});
      for (std::size_t p : used) {
        std::vector<Poly> eqs;
        at(0, p, eqs);
        level = level | SieveExpr::closed(amb, std::move(eqs));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      SieveExpr step = SieveExpr::empty(amb);
      for (const auto& [p, q] : relation) {
        std::vector<Poly> eqs;
        at(i, p, eqs);
        at(i + 1, q, eqs);
        step = step | SieveExpr::closed(amb, std::move(eqs));
      }
      level = level & step;
    }
    levels.push_back(level);
  }
  return SimplicialSieve::general(fib.ambient, std::move(levels));
}

}  // namespace motivic
