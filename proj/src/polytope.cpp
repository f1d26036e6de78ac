#include "origamifan/polytope.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace origami {

namespace {

Rat facet_value(const Facet& f, const QVec& x) {
  Rat s = f.offset;
  for (size_t i = 0; i < x.size(); ++i) s += Rat(f.normal[i]) * x[i];
  return s;
}

Int dot_iq_num(const Vec& n, const Vec& x) {
  Int s = 0;
  for (size_t i = 0; i < n.size(); ++i) s += n[i] * x[i];
  return s;
}

// All k-subsets of {0..m-1}, in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == k) {
      fn(pick);
      return;
    }
    for (int i = start; i <= m - (k - static_cast<int>(pick.size())); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

int affine_rank(const std::vector<QVec>& points) {
  if (points.empty()) return -1;
  std::vector<Vec> diffs;
  for (size_t i = 1; i < points.size(); ++i) {
    QVec d(points[i].size());
    Int den = 1;
    for (size_t j = 0; j < d.size(); ++j) {
      d[j] = points[i][j] - points[0][j];
      den = den / boost::multiprecision::gcd(den, denominator(d[j])) * denominator(d[j]);
    }
    Vec iv(d.size());
    for (size_t j = 0; j < d.size(); ++j) iv[j] = numerator(d[j]) * (den / denominator(d[j]));
    diffs.push_back(std::move(iv));
  }
  if (diffs.empty()) return 0;
  return rank_of(diffs);
}

void check_bounded(const DelzantPolytope& p) {
  int n = p.dim;
  if (n == 0) return;
  std::vector<Vec> normals;
  for (const Facet& f : p.facets) normals.push_back(f.normal);
  if (rank_of(normals) < n)
    throw DomainError("Unbounded", "facet normals do not span the ambient space");
  // A nonzero recession direction lies on an extreme ray with n-1 active
  // constraints (the recession cone is pointed once the normals span).
  bool unbounded = false;
  for_each_subset(static_cast<int>(p.facets.size()), n - 1, [&](const std::vector<int>& sub) {
    if (unbounded) return;
    std::vector<Vec> rows;
    for (int i : sub) rows.push_back(p.facets[i].normal);
    if (!rows.empty() && rank_of(rows) != n - 1) return;
    // Kernel direction of the (n-1) x n system, exact.
    std::vector<QVec> w(rows.size(), QVec(n, Rat(0)));
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < n; ++j) w[i][j] = Rat(rows[i][j]);
    std::vector<int> pivot_col;
    size_t r = 0;
    for (int c = 0; c < n && r < w.size(); ++c) {
      size_t pr = w.size();
      for (size_t i = r; i < w.size(); ++i)
        if (w[i][c] != 0) { pr = i; break; }
      if (pr == w.size()) continue;
      std::swap(w[r], w[pr]);
      Rat inv = Rat(1) / w[r][c];
      for (int j = 0; j < n; ++j) w[r][j] *= inv;
      for (size_t i = 0; i < w.size(); ++i) {
        if (i == r || w[i][c] == 0) continue;
        Rat f = w[i][c];
        for (int j = 0; j < n; ++j) w[i][j] -= f * w[r][j];
      }
      pivot_col.push_back(c);
      ++r;
    }
    int free_col = -1;
    for (int c = 0; c < n; ++c)
      if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
        free_col = c;
        break;
      }
    if (free_col < 0) return;
    QVec dir(n, Rat(0));
    dir[free_col] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) dir[pivot_col[i]] = -w[i][free_col];
    Int den = 1;
    for (const Rat& q : dir)
      den = den / boost::multiprecision::gcd(den, denominator(q)) * denominator(q);
    Vec d(n);
    for (int j = 0; j < n; ++j) d[j] = numerator(dir[j]) * (den / denominator(dir[j]));
    for (const Vec& cand : {d, vec_neg(d)}) {
      bool ok = true;
      for (const Facet& f : p.facets)
        if (dot_iq_num(f.normal, cand) < 0) { ok = false; break; }
      if (ok) {
        unbounded = true;
        return;
      }
    }
  });
  if (unbounded) throw DomainError("Unbounded", "polytope has a recession direction");
}

}  // namespace

std::vector<VertexInfo> vertices(const DelzantPolytope& p) {
  int n = p.dim;
  if (n == 0) return {VertexInfo{{}, {}}};
  int m = static_cast<int>(p.facets.size());
  if (m < n) throw DomainError("Unbounded", "fewer facets than the dimension");
  check_bounded(p);

  std::vector<VertexInfo> out;
  auto seen = [&](const QVec& pt) -> bool {
    for (const VertexInfo& v : out)
      if (v.point == pt) return true;
    return false;
  };
  for_each_subset(m, n, [&](const std::vector<int>& sub) {
    // Solve <n_i, x> = -c_i for the n chosen facets.
    QVec rhs(n);
    std::vector<Vec> colsT(n, Vec(n));
    for (int i = 0; i < n; ++i) {
      rhs[i] = -p.facets[sub[i]].offset;
      for (int j = 0; j < n; ++j) colsT[j][i] = p.facets[sub[i]].normal[j];
    }
    auto x = solve_columns(colsT, rhs);
    if (!x) return;
    for (const Facet& f : p.facets)
      if (facet_value(f, *x) < 0) return;
    if (seen(*x)) return;
    VertexInfo vi;
    vi.point = *x;
    for (int j = 0; j < m; ++j)
      if (facet_value(p.facets[j], *x) == 0) vi.facets.push_back(j);
    out.push_back(std::move(vi));
  });
  if (out.empty()) throw DomainError("Empty", "polytope has no vertices");
  std::sort(out.begin(), out.end(),
            [](const VertexInfo& a, const VertexInfo& b) { return a.point < b.point; });
  return out;
}

DelzantReport is_delzant(const DelzantPolytope& p) {
  DelzantReport rep;
  auto bad = [&](const std::string& msg) {
    rep.delzant = false;
    rep.issues.push_back(msg);
  };
  for (size_t i = 0; i < p.facets.size(); ++i) {
    const Facet& f = p.facets[i];
    if (static_cast<int>(f.normal.size()) != p.dim) {
      bad("facet " + std::to_string(i) + " has a normal of the wrong dimension");
      return rep;
    }
    if (p.dim > 0 && (vec_gcd(f.normal) == 0 || !is_primitive(f.normal)))
      bad("facet " + std::to_string(i) + " normal is not primitive");
    for (size_t j = i + 1; j < p.facets.size(); ++j)
      if (p.facets[j] == f) bad("facets " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  }
  if (!rep.delzant) return rep;

  std::vector<VertexInfo> verts;
  try {
    verts = vertices(p);
  } catch (const DomainError& e) {
    bad(e.what());
    return rep;
  }
  if (p.dim == 0) return rep;

  std::vector<QVec> pts;
  for (const VertexInfo& v : verts) pts.push_back(v.point);
  if (affine_rank(pts) != p.dim) bad("polytope is not full-dimensional");

  for (size_t j = 0; j < p.facets.size(); ++j) {
    std::vector<QVec> on;
    for (const VertexInfo& v : verts)
      if (std::binary_search(v.facets.begin(), v.facets.end(), static_cast<int>(j)))
        on.push_back(v.point);
    if (on.empty() || affine_rank(on) != p.dim - 1)
      bad("facet " + std::to_string(j) + " is not supporting (redundant)");
  }

  for (size_t k = 0; k < verts.size(); ++k) {
    const VertexInfo& v = verts[k];
    if (static_cast<int>(v.facets.size()) != p.dim) {
      bad("vertex " + qvec_to_string(v.point) + " lies on " + std::to_string(v.facets.size()) +
          " facets (not simple)");
      continue;
    }
    std::vector<Vec> ns;
    for (int j : v.facets) ns.push_back(p.facets[j].normal);
    Int d = det(ns);
    if (d != 1 && d != -1)
      bad("vertex " + qvec_to_string(v.point) + " has normal determinant " + d.str());
  }
  return rep;
}

MultiFan normal_fan(const DelzantPolytope& p, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw DomainError("BadSign", "orientation must be +1 or -1");
  DelzantReport rep = is_delzant(p);
  if (!rep.delzant) {
    std::string msg = "polytope is not Delzant";
    if (!rep.issues.empty()) msg += ": " + rep.issues.front();
    throw DomainError("NotDelzant", msg);
  }
  std::vector<VertexInfo> verts = vertices(p);
  MultiFan mf;
  mf.dim = p.dim;
  for (size_t j = 0; j < p.facets.size(); ++j)
    mf.edges["f" + std::to_string(j)] = p.facets[j].normal;
  for (size_t k = 0; k < verts.size(); ++k) {
    WeightedChamber ch;
    ch.id = "v" + std::to_string(k);
    for (int j : verts[k].facets) ch.labels.push_back("f" + std::to_string(j));
    std::sort(ch.labels.begin(), ch.labels.end());
    ch.w_plus = orientation == 1 ? 1 : 0;
    ch.w_minus = orientation == 1 ? 0 : 1;
    mf.chambers.push_back(std::move(ch));
  }
  close_faces(mf);
  return mf;
}

Rat max_chop_depth(const DelzantPolytope& p, int vertex_index) {
  std::vector<VertexInfo> verts = vertices(p);
  if (vertex_index < 0 || vertex_index >= static_cast<int>(verts.size()))
    throw DomainError("VertexNotPresent", "vertex index out of range");
  const VertexInfo& v = verts[vertex_index];
  Rat best(0);
  bool have = false;
  for (size_t k = 0; k < verts.size(); ++k) {
    if (static_cast<int>(k) == vertex_index) continue;
    Rat s(0);
    for (int j : v.facets) s += facet_value(p.facets[j], verts[k].point);
    if (!have || s < best) {
      best = s;
      have = true;
    }
  }
  if (!have) throw DomainError("DepthTooLarge", "polytope has a single vertex; no room to chop");
  return best;
}

DelzantPolytope corner_chop(const DelzantPolytope& p, int vertex_index, const Rat& depth) {
  std::vector<VertexInfo> verts = vertices(p);
  if (vertex_index < 0 || vertex_index >= static_cast<int>(verts.size()))
    throw DomainError("VertexNotPresent", "vertex index out of range");
  if (depth <= 0) throw DomainError("DepthTooLarge", "chop depth must be positive");
  Rat limit = max_chop_depth(p, vertex_index);
  if (depth >= limit)
    throw DomainError("DepthTooLarge", "cut at depth " + rat_to_string(depth) +
                                           " reaches another vertex (limit " +
                                           rat_to_string(limit) + ")");
  const VertexInfo& v = verts[vertex_index];
  Vec u(p.dim, Int(0));
  Rat off(0);
  for (int j : v.facets) {
    u = vec_add(u, p.facets[j].normal);
    off += p.facets[j].offset;
  }
  if (vec_gcd(u) != 1)
    throw DomainError("Internal", "summed normal is not primitive; vertex is not Delzant");
  DelzantPolytope out = p;
  out.facets.push_back(Facet{u, off - depth});
  return out;
}

DelzantPolytope product(const DelzantPolytope& p, const DelzantPolytope& q) {
  DelzantPolytope out;
  out.dim = p.dim + q.dim;
  for (const Facet& f : p.facets) {
    Vec n = f.normal;
    n.resize(out.dim, Int(0));
    out.facets.push_back(Facet{n, f.offset});
  }
  for (const Facet& f : q.facets) {
    Vec n(out.dim, Int(0));
    for (int i = 0; i < q.dim; ++i) n[p.dim + i] = f.normal[i];
    out.facets.push_back(Facet{n, f.offset});
  }
  return out;
}

std::vector<int> facet_neighbors(const DelzantPolytope& p, int facet) {
  if (facet < 0 || facet >= static_cast<int>(p.facets.size()))
    throw DomainError("FacetNotPresent", "facet index out of range");
  std::set<int> nb;
  for (const VertexInfo& v : vertices(p)) {
    if (!std::binary_search(v.facets.begin(), v.facets.end(), facet)) continue;
    for (int j : v.facets)
      if (j != facet) nb.insert(j);
  }
  return std::vector<int>(nb.begin(), nb.end());
}

DelzantPolytope transform(const DelzantPolytope& p, const Mat& m, const QVec& b) {
  if (m.rows != p.dim || m.cols != p.dim || static_cast<int>(b.size()) != p.dim)
    throw DomainError("DimensionMismatch", "transform shape mismatch");
  Mat nt = unimodular_inverse(m).transposed();  // normals map by M^{-T}
  DelzantPolytope out;
  out.dim = p.dim;
  for (const Facet& f : p.facets) {
    Vec n2 = nt.apply(f.normal);
    Rat shift(0);
    for (int i = 0; i < p.dim; ++i) shift += Rat(n2[i]) * b[i];
    out.facets.push_back(Facet{n2, f.offset - shift});
  }
  return out;
}

std::vector<int> facets_through(const DelzantPolytope& p, const QVec& point) {
  std::vector<int> out;
  for (size_t j = 0; j < p.facets.size(); ++j)
    if (facet_value(p.facets[j], point) == 0) out.push_back(static_cast<int>(j));
  return out;
}

}  // namespace origami
