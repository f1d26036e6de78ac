#include "origamifan/origami_template.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace origami {

namespace {

std::string fref_str(FacetRef f) {
  return "(" + std::to_string(f.poly) + "," + std::to_string(f.facet) + ")";
}

void check_refs(const OrigamiTemplate& t) {
  auto check = [&](FacetRef f) {
    if (f.poly < 0 || f.poly >= static_cast<int>(t.polytopes.size()))
      throw DomainError("FacetNotPresent", "fold references missing polytope " + fref_str(f));
    if (f.facet < 0 ||
        f.facet >= static_cast<int>(t.polytopes[f.poly].polytope.facets.size()))
      throw DomainError("FacetNotPresent", "fold references missing facet " + fref_str(f));
  };
  for (const FoldEntry& e : t.folds) {
    check(e.a);
    if (!e.single) check(e.b);
  }
}

std::vector<FacetRef> folded_facets(const OrigamiTemplate& t) {
  std::vector<FacetRef> out;
  for (const FoldEntry& e : t.folds) {
    out.push_back(e.a);
    if (!e.single) out.push_back(e.b);
  }
  return out;
}

// Vertices of polytope p lying on facet j, as exact points.
std::vector<QVec> facet_points(const DelzantPolytope& p, int j,
                               const std::vector<VertexInfo>& verts) {
  std::vector<QVec> pts;
  for (const VertexInfo& v : verts)
    if (std::binary_search(v.facets.begin(), v.facets.end(), j)) pts.push_back(v.point);
  std::sort(pts.begin(), pts.end());
  return pts;
}

// O1 for one fold pair: equal facets, equal halfspaces, and matching
// adjacent halfspaces with equal intersections along the fold.
std::vector<std::string> o1_violations(const DelzantPolytope& pa, int fa,
                                       const DelzantPolytope& pb, int fb,
                                       const std::string& where) {
  std::vector<std::string> out;
  const Facet& Fa = pa.facets[fa];
  const Facet& Fb = pb.facets[fb];
  if (Fa.normal != Fb.normal || Fa.offset != Fb.offset) {
    out.push_back(where + ": fold facets lie on different supporting halfspaces");
    return out;
  }
  std::vector<VertexInfo> va = vertices(pa);
  std::vector<VertexInfo> vb = vertices(pb);
  if (facet_points(pa, fa, va) != facet_points(pb, fb, vb)) {
    out.push_back(where + ": fold facets differ as point sets");
    return out;
  }
  auto side_check = [&](const DelzantPolytope& p1, int f1, const std::vector<VertexInfo>& v1,
                        const DelzantPolytope& p2, int f2, const std::vector<VertexInfo>& v2) {
    for (size_t g = 0; g < p1.facets.size(); ++g) {
      if (static_cast<int>(g) == f1) continue;
      // Intersection of facet g with the fold facet, as vertex points.
      std::vector<QVec> meet;
      for (const VertexInfo& v : v1)
        if (std::binary_search(v.facets.begin(), v.facets.end(), f1) &&
            std::binary_search(v.facets.begin(), v.facets.end(), static_cast<int>(g)))
          meet.push_back(v.point);
      if (meet.empty()) continue;
      std::sort(meet.begin(), meet.end());
      bool matched = false;
      for (size_t g2 = 0; g2 < p2.facets.size(); ++g2) {
        if (static_cast<int>(g2) == f2) continue;
        if (p2.facets[g2] != p1.facets[g]) continue;
        std::vector<QVec> meet2;
        for (const VertexInfo& v : v2)
          if (std::binary_search(v.facets.begin(), v.facets.end(), f2) &&
              std::binary_search(v.facets.begin(), v.facets.end(), static_cast<int>(g2)))
            meet2.push_back(v.point);
        std::sort(meet2.begin(), meet2.end());
        if (meet2 == meet) {
          matched = true;
          break;
        }
      }
      if (!matched)
        out.push_back(where + ": facet " + std::to_string(g) +
                      " meets the fold with no matching halfspace on the other side");
    }
  };
  side_check(pa, fa, va, pb, fb, vb);
  side_check(pb, fb, vb, pa, fa, va);
  return out;
}

}  // namespace

bool facet_is_folded(const OrigamiTemplate& t, FacetRef f) {
  for (const FoldEntry& e : t.folds) {
    if (e.a == f) return true;
    if (!e.single && e.b == f) return true;
  }
  return false;
}

bool facet_non_folded(const OrigamiTemplate& t, FacetRef f) {
  if (facet_is_folded(t, f)) return false;
  for (int g : facet_neighbors(t.polytopes[f.poly].polytope, f.facet))
    if (facet_is_folded(t, FacetRef{f.poly, g})) return false;
  return true;
}

ValidationReport validate_template(const OrigamiTemplate& t) {
  ValidationReport rep;
  auto bad = [&](const std::string& msg) {
    rep.valid = false;
    rep.violations.push_back(msg);
  };

  if (t.polytopes.empty()) {
    bad("template has no polytopes");
    return rep;
  }
  for (size_t i = 0; i < t.polytopes.size(); ++i) {
    const DelzantPolytope& p = t.polytopes[i].polytope;
    if (p.dim != t.dim) bad("polytope " + std::to_string(i) + " has the wrong dimension");
    DelzantReport dr = is_delzant(p);
    for (const std::string& issue : dr.issues)
      bad("polytope " + std::to_string(i) + ": " + issue);
  }
  if (!rep.valid) return rep;

  try {
    check_refs(t);
  } catch (const DomainError& e) {
    bad(e.what());
    return rep;
  }
  for (const FoldEntry& e : t.folds)
    if (!e.single && e.a == e.b) bad("fold pairs a facet with itself " + fref_str(e.a));

  // O1 for each pair.
  for (size_t k = 0; k < t.folds.size(); ++k) {
    const FoldEntry& e = t.folds[k];
    if (e.single) continue;
    for (const std::string& v :
         o1_violations(t.polytopes[e.a.poly].polytope, e.a.facet, t.polytopes[e.b.poly].polytope,
                       e.b.facet, "O1 fold " + std::to_string(k)))
      bad(v);
  }

  // O2: each folded facet occurs once, and none of its neighbors is folded.
  std::vector<FacetRef> folded = folded_facets(t);
  {
    std::map<FacetRef, int> count;
    for (FacetRef f : folded) count[f]++;
    for (const auto& [f, c] : count)
      if (c > 1) bad("O2: facet " + fref_str(f) + " occurs in " + std::to_string(c) + " folds");
    std::set<FacetRef> folded_set(folded.begin(), folded.end());
    for (FacetRef f : folded_set) {
      for (int g : facet_neighbors(t.polytopes[f.poly].polytope, f.facet))
        if (folded_set.count(FacetRef{f.poly, g}))
          bad("O2: folded facet " + fref_str(f) + " has folded neighbor " +
              fref_str(FacetRef{f.poly, g}));
    }
  }

  // O3: the glued space is connected.
  if (template_graph(t).components != 1) bad("O3: glued space is disconnected");
  return rep;
}

TemplateGraph template_graph(const OrigamiTemplate& t) {
  TemplateGraph g;
  g.vertices = static_cast<int>(t.polytopes.size());
  std::vector<int> parent(t.polytopes.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const FoldEntry& e : t.folds) {
    if (e.single) continue;
    ++g.pair_edges;
    parent[find(e.a.poly)] = find(e.b.poly);
  }
  std::set<int> roots;
  for (size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
  g.components = static_cast<int>(roots.size());
  g.b1 = g.pair_edges - g.vertices + g.components;
  return g;
}

TemplateClass classify(const OrigamiTemplate& t) {
  TemplateClass c;
  c.cooriented = std::all_of(t.folds.begin(), t.folds.end(),
                             [](const FoldEntry& e) { return !e.single; });
  c.oriented = c.cooriented &&
               std::all_of(t.polytopes.begin(), t.polytopes.end(),
                           [](const OrientedPolytope& p) { return p.orientation == 1 || p.orientation == -1; }) &&
               std::all_of(t.folds.begin(), t.folds.end(), [&](const FoldEntry& e) {
                 return t.polytopes[e.a.poly].orientation ==
                        -t.polytopes[e.b.poly].orientation;
               });
  TemplateGraph g = template_graph(t);
  c.acyclic = (g.b1 == 0 && g.components == 1);
  return c;
}

namespace {

struct FanKey {
  int poly;
  int facet;
  auto operator<=>(const FanKey&) const = default;
};

std::string fan_key_str(FanKey k) {
  return "p" + std::to_string(k.poly) + "f" + std::to_string(k.facet);
}

}  // namespace

MultiFan multifan_of_template(const OrigamiTemplate& t) {
  TemplateClass cls = classify(t);
  if (!cls.oriented)
    throw DomainError("NotOriented", "the multi-fan is defined for oriented templates only");
  check_refs(t);

  std::vector<std::vector<VertexInfo>> verts;
  for (const OrientedPolytope& op : t.polytopes) verts.push_back(vertices(op.polytope));

  std::set<FanKey> removed_edges;
  std::set<std::pair<int, int>> removed_vertices;  // (poly, vertex index)
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) return x;
    std::string r = find(it->second);
    parent[x] = r;
    return r;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  };

  for (const FoldEntry& e : t.folds) {
    const DelzantPolytope& pa = t.polytopes[e.a.poly].polytope;
    const DelzantPolytope& pb = t.polytopes[e.b.poly].polytope;
    const Facet& Fa = pa.facets[e.a.facet];
    const Facet& Fb = pb.facets[e.b.facet];
    if (Fa.normal != Fb.normal || Fa.offset != Fb.offset)
      throw DomainError("DiamondPreconditionFailed",
                        "fold facets lie on different halfspaces (O1 fails)");
    removed_edges.insert(FanKey{e.a.poly, e.a.facet});
    removed_edges.insert(FanKey{e.b.poly, e.b.facet});

    std::map<QVec, int> b_at;  // fold point -> vertex index in pb
    for (size_t k = 0; k < verts[e.b.poly].size(); ++k) {
      const VertexInfo& v = verts[e.b.poly][k];
      if (std::binary_search(v.facets.begin(), v.facets.end(), e.b.facet))
        b_at[v.point] = static_cast<int>(k);
    }
    int matched = 0;
    for (size_t k = 0; k < verts[e.a.poly].size(); ++k) {
      const VertexInfo& va = verts[e.a.poly][k];
      if (!std::binary_search(va.facets.begin(), va.facets.end(), e.a.facet)) continue;
      auto it = b_at.find(va.point);
      if (it == b_at.end())
        throw DomainError("DiamondPreconditionFailed",
                          "fold vertices do not match between the two polytopes");
      ++matched;
      const VertexInfo& vb = verts[e.b.poly][it->second];
      removed_vertices.insert({e.a.poly, static_cast<int>(k)});
      removed_vertices.insert({e.b.poly, it->second});
      for (int g : va.facets) {
        if (g == e.a.facet) continue;
        bool found = false;
        for (int g2 : vb.facets) {
          if (g2 == e.b.facet) continue;
          if (pb.facets[g2].normal == pa.facets[g].normal) {
            unite(fan_key_str(FanKey{e.a.poly, g}), fan_key_str(FanKey{e.b.poly, g2}));
            found = true;
            break;
          }
        }
        if (!found)
          throw DomainError("DiamondPreconditionFailed",
                            "matched fold vertices span different cones");
      }
    }
    if (matched != static_cast<int>(b_at.size()))
      throw DomainError("DiamondPreconditionFailed",
                        "fold vertices do not match between the two polytopes");
  }

  MultiFan out;
  out.dim = t.dim;
  // Edge classes: representative key -> vector.
  for (size_t i = 0; i < t.polytopes.size(); ++i) {
    const DelzantPolytope& p = t.polytopes[i].polytope;
    for (size_t j = 0; j < p.facets.size(); ++j) {
      FanKey k{static_cast<int>(i), static_cast<int>(j)};
      if (removed_edges.count(k)) continue;
      std::string rep = find(fan_key_str(k));
      auto it = out.edges.find(rep);
      if (it == out.edges.end())
        out.edges[rep] = p.facets[j].normal;
      else if (it->second != p.facets[j].normal)
        throw DomainError("DiamondPreconditionFailed",
                          "identified facets carry different normals");
    }
  }
  for (size_t i = 0; i < t.polytopes.size(); ++i) {
    const DelzantPolytope& p = t.polytopes[i].polytope;
    int orient = t.polytopes[i].orientation;
    for (size_t k = 0; k < verts[i].size(); ++k) {
      const VertexInfo& v = verts[i][k];
      std::vector<std::string> labels;
      bool off_fold = true;
      for (int j : v.facets) {
        FanKey key{static_cast<int>(i), j};
        if (removed_edges.count(key)) {
          off_fold = false;
          continue;
        }
        labels.push_back(find(fan_key_str(key)));
      }
      std::sort(labels.begin(), labels.end());
      out.faces.insert(labels);  // boundary faces survive even off removed cones
      if (!off_fold || removed_vertices.count({static_cast<int>(i), static_cast<int>(k)}))
        continue;
      WeightedChamber ch;
      ch.id = "p" + std::to_string(i) + "v" + std::to_string(k);
      ch.labels = labels;
      ch.w_plus = orient == 1 ? 1 : 0;
      ch.w_minus = orient == 1 ? 0 : 1;
      out.chambers.push_back(std::move(ch));
    }
    (void)p;
  }
  close_faces(out);
  return canonicalize(out);
}

OrigamiTemplate template_diamond(const OrigamiTemplate& t, const OrigamiTemplate& t2, FacetRef f,
                                 FacetRef f2) {
  if (t.dim != t2.dim) throw DomainError("DimensionMismatch", "templates have different dimensions");
  if (f.poly < 0 || f.poly >= static_cast<int>(t.polytopes.size()) ||
      f.facet < 0 || f.facet >= static_cast<int>(t.polytopes[f.poly].polytope.facets.size()))
    throw DomainError("FacetNotPresent", "facet " + fref_str(f) + " out of range");
  if (f2.poly < 0 || f2.poly >= static_cast<int>(t2.polytopes.size()) ||
      f2.facet < 0 || f2.facet >= static_cast<int>(t2.polytopes[f2.poly].polytope.facets.size()))
    throw DomainError("FacetNotPresent", "facet " + fref_str(f2) + " out of range");

  if (!facet_non_folded(t, f))
    throw DomainError("NotNonFolded", "facet " + fref_str(f) + " touches the fold set");
  if (!facet_non_folded(t2, f2))
    throw DomainError("NotNonFolded", "facet " + fref_str(f2) + " touches the fold set");

  int oa = t.polytopes[f.poly].orientation;
  int ob = t2.polytopes[f2.poly].orientation;
  if (oa == 0 || ob == 0 || oa != -ob)
    throw DomainError("SameOrientation",
                      "diamond requires oppositely oriented host polytopes");

  std::vector<std::string> o1 = o1_violations(t.polytopes[f.poly].polytope, f.facet,
                                              t2.polytopes[f2.poly].polytope, f2.facet, "diamond");
  if (!o1.empty()) throw DomainError("NeighborhoodMismatch", o1.front());

  OrigamiTemplate out;
  out.dim = t.dim;
  out.polytopes = t.polytopes;
  out.polytopes.insert(out.polytopes.end(), t2.polytopes.begin(), t2.polytopes.end());
  int shift = static_cast<int>(t.polytopes.size());
  out.folds = t.folds;
  for (FoldEntry e : t2.folds) {
    e.a.poly += shift;
    if (!e.single) e.b.poly += shift;
    out.folds.push_back(e);
  }
  FoldEntry glue;
  glue.single = false;
  glue.a = f;
  glue.b = FacetRef{f2.poly + shift, f2.facet};
  out.folds.push_back(glue);

  ValidationReport rep = validate_template(out);
  if (!rep.valid)
    throw DomainError("TemplateInvalid", "diamond result fails validation: " + rep.violations.front());
  return out;
}

OrigamiTemplate chop_template(const OrigamiTemplate& t, const VertexRef& v, const Rat& depth,
                              int* new_facet_index) {
  if (v.poly < 0 || v.poly >= static_cast<int>(t.polytopes.size()))
    throw DomainError("VertexNotPresent", "polytope index out of range");
  OrigamiTemplate out = t;
  DelzantPolytope& p = out.polytopes[v.poly].polytope;
  if (new_facet_index) *new_facet_index = static_cast<int>(p.facets.size());
  p = corner_chop(p, v.vertex, depth);
  return out;
}

OrigamiTemplate template_connected_sum(const OrigamiTemplate& t, const OrigamiTemplate& t2,
                                       VertexRef v, VertexRef v2) {
  if (t.dim != t2.dim) throw DomainError("DimensionMismatch", "templates have different dimensions");
  const DelzantPolytope& pa = t.polytopes.at(v.poly).polytope;
  const DelzantPolytope& pb = t2.polytopes.at(v2.poly).polytope;
  std::vector<VertexInfo> va = vertices(pa);
  std::vector<VertexInfo> vb = vertices(pb);
  if (v.vertex < 0 || v.vertex >= static_cast<int>(va.size()) || v2.vertex < 0 ||
      v2.vertex >= static_cast<int>(vb.size()))
    throw DomainError("VertexNotPresent", "vertex index out of range");

  for (int j : va[v.vertex].facets)
    if (facet_is_folded(t, FacetRef{v.poly, j}))
      throw DomainError("VertexOnFold", "first vertex lies on a folded facet");
  for (int j : vb[v2.vertex].facets)
    if (facet_is_folded(t2, FacetRef{v2.poly, j}))
      throw DomainError("VertexOnFold", "second vertex lies on a folded facet");

  std::multiset<Vec> na, nb;
  for (int j : va[v.vertex].facets) na.insert(pa.facets[j].normal);
  for (int j : vb[v2.vertex].facets) nb.insert(pb.facets[j].normal);
  if (na != nb)
    throw DomainError("ConeMismatch", "vertex cones differ; align the templates first");

  int oa = t.polytopes[v.poly].orientation;
  int ob = t2.polytopes[v2.poly].orientation;
  if (oa == 0 || ob == 0 || oa != -ob)
    throw DomainError("SameOrientation",
                      "connected sum requires oppositely oriented host polytopes");

  Rat da = max_chop_depth(pa, v.vertex);
  Rat db = max_chop_depth(pb, v2.vertex);
  Rat depth = (da < db ? da : db) / 2;

  int fa = -1, fb = -1;
  OrigamiTemplate ta = chop_template(t, v, depth, &fa);
  OrigamiTemplate tb = chop_template(t2, v2, depth, &fb);

  QVec shift(t.dim);
  for (int i = 0; i < t.dim; ++i)
    shift[i] = va[v.vertex].point[i] - vb[v2.vertex].point[i];
  tb = transform_template(tb, Mat::identity(t.dim), shift);

  return template_diamond(ta, tb, FacetRef{v.poly, fa}, FacetRef{v2.poly, fb});
}

OrigamiTemplate sphere_template(int n) {
  if (n < 1) throw DomainError("BadDimension", "sphere template needs n >= 1");
  DelzantPolytope simplex;
  simplex.dim = n;
  for (int i = 0; i < n; ++i) {
    Vec e(n, Int(0));
    e[i] = 1;
    simplex.facets.push_back(Facet{e, Rat(0)});
  }
  simplex.facets.push_back(Facet{Vec(n, Int(-1)), Rat(1)});
  OrigamiTemplate t;
  t.dim = n;
  t.polytopes.push_back({simplex, 1});
  t.polytopes.push_back({simplex, -1});
  FoldEntry e;
  e.single = false;
  e.a = FacetRef{0, n};
  e.b = FacetRef{1, n};
  t.folds.push_back(e);
  return t;
}

OrigamiTemplate product_with_delzant(const OrigamiTemplate& t, const DelzantPolytope& q) {
  DelzantReport dr = is_delzant(q);
  if (!dr.delzant) throw DomainError("NotDelzant", "product factor is not Delzant");
  OrigamiTemplate out;
  out.dim = t.dim + q.dim;
  for (const OrientedPolytope& op : t.polytopes)
    out.polytopes.push_back({product(op.polytope, q), op.orientation});
  out.folds = t.folds;  // fold facet indices are preserved by product()
  return out;
}

int count_fixed_points(const OrigamiTemplate& t) {
  int count = 0;
  for (size_t i = 0; i < t.polytopes.size(); ++i) {
    std::set<int> folded;
    for (const FoldEntry& e : t.folds) {
      if (e.a.poly == static_cast<int>(i)) folded.insert(e.a.facet);
      if (!e.single && e.b.poly == static_cast<int>(i)) folded.insert(e.b.facet);
    }
    for (const VertexInfo& v : vertices(t.polytopes[i].polytope)) {
      bool on_fold = std::any_of(v.facets.begin(), v.facets.end(),
                                 [&](int j) { return folded.count(j) > 0; });
      if (!on_fold) ++count;
    }
  }
  return count;
}

std::vector<std::vector<FacetRef>> glued_facet_classes(const OrigamiTemplate& t) {
  check_refs(t);
  std::set<FacetRef> folded;
  for (FacetRef f : folded_facets(t)) folded.insert(f);

  std::map<FacetRef, FacetRef> parent;
  std::function<FacetRef(FacetRef)> find = [&](FacetRef x) -> FacetRef {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) return x;
    FacetRef r = find(it->second);
    parent[x] = r;
    return r;
  };
  auto unite = [&](FacetRef a, FacetRef b) {
    FacetRef ra = find(a), rb = find(b);
    if (rb < ra) std::swap(ra, rb);
    if (!(ra == rb)) parent[rb] = ra;
  };

  std::vector<std::vector<VertexInfo>> verts;
  for (const OrientedPolytope& op : t.polytopes) verts.push_back(vertices(op.polytope));

  for (const FoldEntry& e : t.folds) {
    if (e.single) continue;
    const DelzantPolytope& pa = t.polytopes[e.a.poly].polytope;
    const DelzantPolytope& pb = t.polytopes[e.b.poly].polytope;
    for (size_t g = 0; g < pa.facets.size(); ++g) {
      if (static_cast<int>(g) == e.a.facet) continue;
      std::vector<QVec> meet;
      for (const VertexInfo& v : verts[e.a.poly])
        if (std::binary_search(v.facets.begin(), v.facets.end(), e.a.facet) &&
            std::binary_search(v.facets.begin(), v.facets.end(), static_cast<int>(g)))
          meet.push_back(v.point);
      if (meet.empty()) continue;
      std::sort(meet.begin(), meet.end());
      for (size_t g2 = 0; g2 < pb.facets.size(); ++g2) {
        if (static_cast<int>(g2) == e.b.facet) continue;
        if (pb.facets[g2] != pa.facets[g]) continue;
        std::vector<QVec> meet2;
        for (const VertexInfo& v : verts[e.b.poly])
          if (std::binary_search(v.facets.begin(), v.facets.end(), e.b.facet) &&
              std::binary_search(v.facets.begin(), v.facets.end(), static_cast<int>(g2)))
            meet2.push_back(v.point);
        std::sort(meet2.begin(), meet2.end());
        if (meet2 == meet) {
          unite(FacetRef{e.a.poly, static_cast<int>(g)}, FacetRef{e.b.poly, static_cast<int>(g2)});
          break;
        }
      }
    }
  }

  std::map<FacetRef, std::vector<FacetRef>> classes;
  for (size_t i = 0; i < t.polytopes.size(); ++i)
    for (size_t j = 0; j < t.polytopes[i].polytope.facets.size(); ++j) {
      FacetRef f{static_cast<int>(i), static_cast<int>(j)};
      if (folded.count(f)) continue;
      classes[find(f)].push_back(f);
    }
  std::vector<std::vector<FacetRef>> out;
  for (auto& [rep, members] : classes) {
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Piece {
  int poly;
  std::vector<int> vertex_indices;  // sorted
  bool operator<(const Piece& o) const {
    return std::tie(poly, vertex_indices) < std::tie(o.poly, o.vertex_indices);
  }
  bool operator==(const Piece& o) const = default;
};

}  // namespace

bool faces_connected(const OrigamiTemplate& t) {
  std::vector<std::vector<FacetRef>> classes = glued_facet_classes(t);
  std::vector<std::vector<VertexInfo>> verts;
  for (const OrientedPolytope& op : t.polytopes) verts.push_back(vertices(op.polytope));
  std::vector<std::set<int>> folded_per_poly(t.polytopes.size());
  for (FacetRef f : folded_facets(t)) folded_per_poly[f.poly].insert(f.facet);

  int np = static_cast<int>(t.polytopes.size());

  // Pieces of the intersection of a class subset, per polytope: choose one
  // member of each class and take the common vertices.
  auto pieces_of = [&](const std::vector<int>& subset) {
    std::vector<Piece> pieces;
    for (int p = 0; p < np; ++p) {
      std::vector<std::vector<int>> members(subset.size());
      bool all_present = true;
      for (size_t s = 0; s < subset.size(); ++s) {
        for (FacetRef f : classes[subset[s]])
          if (f.poly == p) members[s].push_back(f.facet);
        if (members[s].empty()) {
          all_present = false;
          break;
        }
      }
      if (!all_present) continue;
      std::vector<int> choice(subset.size(), 0);
      for (;;) {
        std::vector<int> common;
        for (size_t k = 0; k < verts[p].size(); ++k) {
          const VertexInfo& v = verts[p][k];
          bool on_all = true;
          for (size_t s = 0; s < subset.size(); ++s)
            if (!std::binary_search(v.facets.begin(), v.facets.end(), members[s][choice[s]])) {
              on_all = false;
              break;
            }
          if (on_all) common.push_back(static_cast<int>(k));
        }
        if (!common.empty()) pieces.push_back(Piece{p, common});
        int d = static_cast<int>(subset.size()) - 1;
        while (d >= 0 && choice[d] + 1 >= static_cast<int>(members[d].size())) {
          choice[d] = 0;
          --d;
        }
        if (d < 0) break;
        ++choice[d];
      }
    }
    std::sort(pieces.begin(), pieces.end());
    pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
    return pieces;
  };

  auto check_subset = [&](const std::vector<int>& subset) -> std::pair<bool, bool> {
    // returns (nonempty, ok)
    std::vector<Piece> pieces = pieces_of(subset);
    if (pieces.empty()) return {false, true};

    // Connectivity of the pieces inside the glued space.
    std::vector<int> comp(pieces.size());
    for (size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    auto unite = [&](int a, int b) { comp[find(a)] = find(b); };

    for (size_t i = 0; i < pieces.size(); ++i)
      for (size_t j = i + 1; j < pieces.size(); ++j) {
        if (pieces[i].poly == pieces[j].poly) {
          std::vector<int> inter;
          std::set_intersection(pieces[i].vertex_indices.begin(), pieces[i].vertex_indices.end(),
                                pieces[j].vertex_indices.begin(), pieces[j].vertex_indices.end(),
                                std::back_inserter(inter));
          if (!inter.empty()) unite(static_cast<int>(i), static_cast<int>(j));
          continue;
        }
        for (const FoldEntry& e : t.folds) {
          if (e.single) continue;
          int pi = pieces[i].poly, pj = pieces[j].poly;
          FacetRef fi, fj;
          if (e.a.poly == pi && e.b.poly == pj) {
            fi = e.a;
            fj = e.b;
          } else if (e.b.poly == pi && e.a.poly == pj) {
            fi = e.b;
            fj = e.a;
          } else {
            continue;
          }
          std::set<QVec> pts_i, pts_j;
          for (int k : pieces[i].vertex_indices) {
            const VertexInfo& v = verts[pi][static_cast<size_t>(k)];
            if (std::binary_search(v.facets.begin(), v.facets.end(), fi.facet)) pts_i.insert(v.point);
          }
          for (int k : pieces[j].vertex_indices) {
            const VertexInfo& v = verts[pj][static_cast<size_t>(k)];
            if (std::binary_search(v.facets.begin(), v.facets.end(), fj.facet)) pts_j.insert(v.point);
          }
          bool touch = std::any_of(pts_i.begin(), pts_i.end(),
                                   [&](const QVec& q) { return pts_j.count(q) > 0; });
          if (touch) unite(static_cast<int>(i), static_cast<int>(j));
        }
      }
    std::set<int> roots;
    for (size_t i = 0; i < pieces.size(); ++i) roots.insert(find(static_cast<int>(i)));
    bool connected = roots.size() == 1;

    bool has_vertex = false;
    for (const Piece& piece : pieces)
      for (int k : piece.vertex_indices) {
        const VertexInfo& v = verts[piece.poly][static_cast<size_t>(k)];
        bool on_fold = std::any_of(v.facets.begin(), v.facets.end(), [&](int j) {
          return folded_per_poly[piece.poly].count(j) > 0;
        });
        if (!on_fold) has_vertex = true;
      }
    return {true, connected && has_vertex};
  };

  // All nonempty subsets, pruning once an intersection is empty.
  int nc = static_cast<int>(classes.size());
  bool ok = true;
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& subset, int next) {
    if (!ok) return;
    if (!subset.empty()) {
      auto [nonempty, good] = check_subset(subset);
      if (!nonempty) return;  // supersets are empty too
      if (!good) {
        ok = false;
        return;
      }
    }
    for (int c = next; c < nc; ++c) {
      subset.push_back(c);
      rec(subset, c + 1);
      subset.pop_back();
    }
  };
  std::vector<int> subset;
  rec(subset, 0);
  return ok;
}

OrigamiTemplate transform_template(const OrigamiTemplate& t, const Mat& m, const QVec& b) {
  OrigamiTemplate out = t;
  for (OrientedPolytope& op : out.polytopes) op.polytope = transform(op.polytope, m, b);
  return out;
}

OrigamiTemplate flip_orientations(const OrigamiTemplate& t) {
  OrigamiTemplate out = t;
  for (OrientedPolytope& op : out.polytopes) op.orientation = -op.orientation;
  return out;
}

}  // namespace origami
