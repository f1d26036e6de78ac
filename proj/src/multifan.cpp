#include "origamifan/multifan.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace origami {

namespace {

std::vector<std::string> sorted_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  return labels;
}

bool contains_label(const std::vector<std::string>& labels, const std::string& l) {
  return std::binary_search(labels.begin(), labels.end(), l);
}

bool is_subset(const std::vector<std::string>& sub, const std::vector<std::string>& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Sorted multiset of generator vectors: the geometric cone of a label set.
std::vector<Vec> cone_signature(const MultiFan& mf, const std::vector<std::string>& labels) {
  std::vector<Vec> sig;
  sig.reserve(labels.size());
  for (const std::string& l : labels) sig.push_back(mf.edge_vector(l));
  std::sort(sig.begin(), sig.end());
  return sig;
}

Int cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec cross3(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Int dot(const Vec& a, const Vec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// Angle order on nonzero 2-vectors, angles in [0, 2*pi).
bool angle_less(const Vec& a, const Vec& b) {
  auto half = [](const Vec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b) > 0;
}

struct UnionFind {
  std::map<std::string, std::string> parent;

  void add(const std::string& x) { parent.emplace(x, x); }
  std::string find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent.emplace(x, x);
      return x;
    }
    if (it->second == x) return x;
    std::string root = find(it->second);
    parent[x] = root;
    return root;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  }
};

}  // namespace

const Vec& MultiFan::edge_vector(const std::string& label) const {
  auto it = edges.find(label);
  if (it == edges.end()) throw DomainError("EdgeNotPresent", "no edge labeled '" + label + "'");
  return it->second;
}

std::vector<Vec> MultiFan::vectors_of(const std::vector<std::string>& labels) const {
  std::vector<Vec> out;
  out.reserve(labels.size());
  for (const std::string& l : labels) out.push_back(edge_vector(l));
  return out;
}

const WeightedChamber* MultiFan::find_chamber(const std::string& id) const {
  for (const WeightedChamber& ch : chambers)
    if (ch.id == id) return &ch;
  return nullptr;
}

void close_faces(MultiFan& mf) {
  std::set<std::vector<std::string>> closed;
  closed.insert({});
  auto add_subsets = [&](const std::vector<std::string>& labels) {
    size_t n = labels.size();
    if (n > 20) throw DomainError("TooLarge", "face with more than 20 labels");
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
      std::vector<std::string> sub;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t(1) << i)) sub.push_back(labels[i]);
      closed.insert(std::move(sub));
    }
  };
  for (const auto& f : mf.faces) add_subsets(sorted_labels(f));
  for (const auto& ch : mf.chambers) add_subsets(sorted_labels(ch.labels));
  mf.faces = std::move(closed);
}

ValidationReport validate(const MultiFan& mf) {
  ValidationReport rep;
  auto bad = [&](const std::string& msg) {
    rep.valid = false;
    rep.violations.push_back(msg);
  };

  if (mf.dim < 0) bad("negative dimension");

  for (const auto& [label, v] : mf.edges) {
    if (static_cast<int>(v.size()) != mf.dim) {
      bad("edge '" + label + "' has wrong dimension");
      continue;
    }
    if (is_zero(v))
      bad("edge '" + label + "' is the zero vector");
    else if (!is_primitive(v))
      bad("edge '" + label + "' is not primitive: " + vec_to_string(v));
  }

  if (!mf.faces.count({})) bad("face set does not contain the empty face");
  for (const auto& face : mf.faces) {
    if (!std::is_sorted(face.begin(), face.end()) ||
        std::adjacent_find(face.begin(), face.end()) != face.end()) {
      bad("face has unsorted or repeated labels");
      continue;
    }
    bool known = true;
    for (const std::string& l : face)
      if (!mf.edges.count(l)) {
        bad("face references unknown edge '" + l + "'");
        known = false;
      }
    if (!known) continue;
    if (static_cast<int>(face.size()) > mf.dim) bad("face larger than the ambient dimension");
    if (face.size() >= 2) {
      std::vector<Vec> vs = mf.vectors_of(face);
      if (rank_of(vs) != static_cast<int>(face.size()))
        bad("face has dependent generators: {" + face[0] + ",...}");
    }
    // Closure under removing one element.
    for (size_t i = 0; i < face.size(); ++i) {
      std::vector<std::string> sub = face;
      sub.erase(sub.begin() + static_cast<long>(i));
      if (!mf.faces.count(sub)) bad("face set not closed under subsets");
    }
  }

  std::set<std::string> ids;
  for (const auto& ch : mf.chambers) {
    if (!ids.insert(ch.id).second) bad("duplicate chamber id '" + ch.id + "'");
    std::vector<std::string> labels = sorted_labels(ch.labels);
    if (static_cast<int>(labels.size()) != mf.dim ||
        std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      bad("chamber '" + ch.id + "' does not have " + std::to_string(mf.dim) +
          " distinct labels");
      continue;
    }
    bool known = true;
    for (const std::string& l : labels)
      if (!mf.edges.count(l)) {
        bad("chamber '" + ch.id + "' references unknown edge '" + l + "'");
        known = false;
      }
    if (!known) continue;
    std::vector<Vec> vs = mf.vectors_of(labels);
    if (mf.dim > 0 && det(vs) == 0)
      bad("chamber '" + ch.id + "' has dependent generators");
    for (size_t i = 0; i < labels.size(); ++i) {
      std::vector<std::string> sub = labels;
      sub.erase(sub.begin() + static_cast<long>(i));
      if (!mf.faces.count(sub)) bad("chamber '" + ch.id + "' has a facet missing from the face set");
    }
    if (ch.w_plus < 0 || ch.w_minus < 0)
      bad("chamber '" + ch.id + "' has a negative weight");
    else if (ch.w_plus == 0 && ch.w_minus == 0)
      bad("chamber '" + ch.id + "' has weight (0,0)");
  }
  return rep;
}

bool is_nonsingular(const MultiFan& mf) {
  for (const auto& face : mf.faces) {
    if (face.empty()) continue;
    if (!extends_to_basis(mf.vectors_of(face), mf.dim)) return false;
  }
  for (const auto& ch : mf.chambers)
    if (!extends_to_basis(mf.vectors_of(sorted_labels(ch.labels)), mf.dim)) return false;
  return true;
}

namespace {

// d_v for one generic direction: sum of w+ - w- over chambers whose open cone
// contains v.
Int directional_sum(const MultiFan& mf, const Vec& v) {
  Int total = 0;
  QVec rhs(v.size());
  for (size_t i = 0; i < v.size(); ++i) rhs[i] = Rat(v[i]);
  for (const auto& ch : mf.chambers) {
    std::vector<Vec> cols = mf.vectors_of(ch.labels);
    auto x = solve_columns(cols, rhs);
    if (!x) throw DomainError("Internal", "degenerate chamber in degree computation");
    bool inside = std::all_of(x->begin(), x->end(), [](const Rat& c) { return c > 0; });
    if (inside) total += ch.w_plus - ch.w_minus;
  }
  return total;
}

bool vec_lex_less(const Vec& a, const Vec& b) { return a < b; }

std::vector<Vec> witnesses_dim1(const MultiFan&) { return {Vec{1}, Vec{-1}}; }

std::vector<Vec> witnesses_dim2(const MultiFan& mf) {
  std::set<Vec> rayset;
  for (const auto& [l, v] : mf.edges) {
    rayset.insert(v);
    rayset.insert(vec_neg(v));
  }
  std::vector<Vec> rays(rayset.begin(), rayset.end());
  std::sort(rays.begin(), rays.end(), angle_less);
  std::vector<Vec> out;
  if (rays.size() == 2) {
    // A single line: the two open half planes.
    Vec perp{-rays[0][1], rays[0][0]};
    out.push_back(perp);
    out.push_back(vec_neg(perp));
    return out;
  }
  for (size_t i = 0; i < rays.size(); ++i) {
    const Vec& a = rays[i];
    const Vec& b = rays[(i + 1) % rays.size()];
    out.push_back(vec_add(a, b));  // interior of the sector, gap < pi
  }
  return out;
}

std::vector<Vec> witnesses_dim3(const MultiFan& mf) {
  std::vector<Vec> vs;
  for (const auto& [l, v] : mf.edges) vs.push_back(v);
  std::set<Vec> planeset;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      Vec c = cross3(vs[i], vs[j]);
      if (is_zero(c)) continue;
      c = primitive(c);
      if (c < vec_neg(c)) c = vec_neg(c);  // sign-normalize
      planeset.insert(c);
    }
  std::vector<Vec> planes(planeset.begin(), planeset.end());
  std::vector<Vec> out;

  for (size_t k = 0; k < planes.size(); ++k) {
    const Vec& nk = planes[k];
    // Orthogonal integer basis of the plane.
    Vec b1;
    for (const Vec& axis : {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}) {
      Vec c = cross3(nk, axis);
      if (!is_zero(c)) {
        b1 = primitive(c);
        break;
      }
    }
    Vec b2 = primitive(cross3(nk, b1));

    // Traces of the other planes: lines through the origin in (b1,b2)
    // coordinates.
    std::set<Vec> rayset;
    for (size_t m = 0; m < planes.size(); ++m) {
      if (m == k) continue;
      Vec d = cross3(nk, planes[m]);
      if (is_zero(d)) continue;
      Rat alpha = Rat(dot(d, b1)) / Rat(dot(b1, b1));
      Rat beta = Rat(dot(d, b2)) / Rat(dot(b2, b2));
      Int da = numerator(alpha) * denominator(beta);
      Int db = numerator(beta) * denominator(alpha);
      Vec dir = primitive(Vec{da, db});
      rayset.insert(dir);
      rayset.insert(vec_neg(dir));
    }

    std::vector<Vec> sector_dirs;  // interior directions of the 2d sectors
    if (rayset.empty()) {
      sector_dirs.push_back(Vec{1, 0});
    } else {
      std::vector<Vec> rays(rayset.begin(), rayset.end());
      std::sort(rays.begin(), rays.end(), angle_less);
      if (rays.size() == 2) {
        Vec perp{-rays[0][1], rays[0][0]};
        sector_dirs.push_back(perp);
        sector_dirs.push_back(vec_neg(perp));
      } else {
        for (size_t i = 0; i < rays.size(); ++i)
          sector_dirs.push_back(vec_add(rays[i], rays[(i + 1) % rays.size()]));
      }
    }

    for (const Vec& s : sector_dirs) {
      Vec u = vec_add(vec_scale(s[0], b1), vec_scale(s[1], b2));
      // Push off the plane by less than the distance to every other plane.
      Int max_num = 1, max_den = 1;  // eps = den/(2*num) lower bound bookkeeping
      Rat eps(1);
      for (size_t m = 0; m < planes.size(); ++m) {
        if (m == k) continue;
        Int t = int_abs(dot(planes[m], u));
        if (t == 0) throw DomainError("Internal", "sector witness lies on another plane");
        Int sdot = int_abs(dot(planes[m], nk)) + 1;
        Rat bound = Rat(t) / Rat(2 * sdot);
        if (bound < eps) eps = bound;
      }
      (void)max_num;
      (void)max_den;
      Int p = numerator(eps), q = denominator(eps);
      Vec base = vec_scale(q, u);
      out.push_back(vec_add(base, vec_scale(p, nk)));
      out.push_back(vec_sub(base, vec_scale(p, nk)));
    }
  }
  if (out.empty()) out.push_back(Vec{1, 0, 0});  // no planes at all
  return out;
}

bool is_generic(const MultiFan& mf, const Vec& v) {
  // Not on any hyperplane spanned by dim-1 edge vectors.
  std::vector<Vec> vs;
  for (const auto& [l, w] : mf.edges) vs.push_back(w);
  int n = mf.dim;
  if (n == 1) return v[0] != 0;
  std::vector<int> idx(vs.size());
  std::vector<int> comb;
  std::function<bool(size_t, int)> scan = [&](size_t start, int need) -> bool {
    if (need == 0) {
      std::vector<Vec> sub;
      for (int i : comb) sub.push_back(vs[static_cast<size_t>(i)]);
      if (rank_of(sub) != n - 1) return true;  // degenerate pick, no hyperplane
      sub.push_back(v);
      return rank_of(sub) == n;
    }
    for (size_t i = start; i + static_cast<size_t>(need) <= vs.size() + 1 && i < vs.size(); ++i) {
      comb.push_back(static_cast<int>(i));
      bool ok = scan(i + 1, need - 1);
      comb.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return scan(0, n - 1);
}

std::vector<Vec> witnesses_sampled(const MultiFan& mf, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> dist(-1000000, 1000000);
  std::vector<Vec> out;
  const int kSamples = 64;
  for (int s = 0; s < kSamples; ++s) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      Vec v(mf.dim);
      for (int i = 0; i < mf.dim; ++i) v[i] = Int(dist(rng));
      if (is_zero(v) || !is_generic(mf, v)) continue;
      out.push_back(std::move(v));
      break;
    }
  }
  if (out.empty()) throw DomainError("Internal", "failed to sample generic directions");
  return out;
}

std::vector<Vec> degree_witnesses(const MultiFan& mf, std::uint64_t seed) {
  switch (mf.dim) {
    case 1:
      return witnesses_dim1(mf);
    case 2:
      return witnesses_dim2(mf);
    case 3:
      return witnesses_dim3(mf);
    default:
      return witnesses_sampled(mf, seed);
  }
}

}  // namespace

Int degree(const MultiFan& mf, std::uint64_t seed) {
  if (mf.chambers.empty())
    throw DomainError("EmptyTopDimension", "multi-fan has no top-dimensional cones");
  if (mf.dim == 0) {
    Int d = 0;
    for (const auto& ch : mf.chambers) d += ch.w_plus - ch.w_minus;
    return d;
  }
  std::vector<Vec> ws = degree_witnesses(mf, seed);
  bool have = false;
  Int d = 0;
  Vec first_w;
  for (const Vec& w : ws) {
    Int dw = directional_sum(mf, w);
    if (!have) {
      d = dw;
      first_w = w;
      have = true;
    } else if (dw != d) {
      throw DomainError("NotPreComplete", "d_v depends on the direction: d at " +
                                              vec_to_string(first_w) + " is " + d.str() +
                                              ", d at " + vec_to_string(w) + " is " + dw.str());
    }
  }
  return d;
}

std::optional<Int> try_degree(const MultiFan& mf, std::string* error, std::uint64_t seed) {
  try {
    return degree(mf, seed);
  } catch (const DomainError& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

MultiFan projected(const MultiFan& mf, const std::vector<std::string>& K) {
  std::vector<std::string> key = sorted_labels(K);
  if (!mf.faces.count(key))
    throw DomainError("FaceNotPresent", "face is not in the multi-fan");
  if (key.empty()) return mf;

  int k = static_cast<int>(key.size());
  Mat proj = quotient_projection(mf.vectors_of(key), mf.dim);

  MultiFan out;
  out.dim = mf.dim - k;
  for (const auto& face : mf.faces) {
    if (!is_subset(key, face)) continue;
    std::vector<std::string> rest;
    std::set_difference(face.begin(), face.end(), key.begin(), key.end(),
                        std::back_inserter(rest));
    out.faces.insert(rest);
    if (rest.size() == 1) {
      Vec img = proj.apply(mf.edge_vector(rest[0]));
      out.edges[rest[0]] = primitive(img);
    }
  }
  for (const auto& ch : mf.chambers) {
    std::vector<std::string> labels = sorted_labels(ch.labels);
    if (!is_subset(key, labels)) continue;
    std::vector<std::string> rest;
    std::set_difference(labels.begin(), labels.end(), key.begin(), key.end(),
                        std::back_inserter(rest));
    out.chambers.push_back({ch.id, rest, ch.w_plus, ch.w_minus});
  }
  close_faces(out);
  return out;
}

bool is_complete(const MultiFan& mf, std::uint64_t seed) {
  if (!try_degree(mf, nullptr, seed)) return false;
  for (const auto& face : mf.faces) {
    if (face.empty()) continue;
    if (!try_degree(projected(mf, face), nullptr, seed)) return false;
  }
  return true;
}

MultiFan flip_edge(const MultiFan& mf, const std::string& label) {
  MultiFan out = mf;
  auto it = out.edges.find(label);
  if (it == out.edges.end())
    throw DomainError("EdgeNotPresent", "no edge labeled '" + label + "'");
  it->second = vec_neg(it->second);
  for (auto& ch : out.chambers)
    if (contains_label(sorted_labels(ch.labels), label)) std::swap(ch.w_plus, ch.w_minus);
  return out;
}

MultiFan flip_global(const MultiFan& mf) {
  MultiFan out = mf;
  for (auto& [l, v] : out.edges) v = vec_neg(v);
  for (auto& ch : out.chambers) std::swap(ch.w_plus, ch.w_minus);
  return out;
}

MultiFan flip_weights(const MultiFan& mf) {
  MultiFan out = mf;
  for (auto& ch : out.chambers) std::swap(ch.w_plus, ch.w_minus);
  return out;
}

namespace {

struct DiamondSide {
  std::vector<size_t> removed_chambers;
  std::set<std::vector<std::string>> removed_faces;
};

DiamondSide collect_neighborhood(const MultiFan& mf, const std::string& L) {
  DiamondSide side;
  for (size_t i = 0; i < mf.chambers.size(); ++i)
    if (contains_label(sorted_labels(mf.chambers[i].labels), L)) side.removed_chambers.push_back(i);
  for (const auto& face : mf.faces)
    if (contains_label(face, L)) side.removed_faces.insert(face);
  return side;
}

MultiFan rebuild_union(const MultiFan& a, const MultiFan& b,
                       const std::set<std::string>& drop_a, const std::set<std::string>& drop_b,
                       const std::set<size_t>& drop_ch_a, const std::set<size_t>& drop_ch_b,
                       UnionFind& uf) {
  MultiFan out;
  out.dim = a.dim;
  auto key_a = [](const std::string& l) { return "a:" + l; };
  auto key_b = [](const std::string& l) { return "b:" + l; };

  for (const auto& [l, v] : a.edges) {
    if (drop_a.count(l)) continue;
    std::string rep = uf.find(key_a(l));
    auto it = out.edges.find(rep);
    if (it == out.edges.end())
      out.edges[rep] = v;
    else if (it->second != v)
      throw DomainError("Internal", "identified edges with different vectors");
  }
  for (const auto& [l, v] : b.edges) {
    if (drop_b.count(l)) continue;
    std::string rep = uf.find(key_b(l));
    auto it = out.edges.find(rep);
    if (it == out.edges.end())
      out.edges[rep] = v;
    else if (it->second != v)
      throw DomainError("Internal", "identified edges with different vectors");
  }

  auto map_labels = [&](const std::vector<std::string>& labels, bool from_a) {
    std::vector<std::string> mapped;
    mapped.reserve(labels.size());
    for (const std::string& l : labels) mapped.push_back(uf.find(from_a ? key_a(l) : key_b(l)));
    std::sort(mapped.begin(), mapped.end());
    return mapped;
  };

  auto face_ok = [&](const std::vector<std::string>& face, const std::set<std::string>& drop) {
    for (const std::string& l : face)
      if (drop.count(l)) return false;
    return true;
  };
  for (const auto& face : a.faces)
    if (face_ok(face, drop_a)) out.faces.insert(map_labels(face, true));
  for (const auto& face : b.faces)
    if (face_ok(face, drop_b)) out.faces.insert(map_labels(face, false));

  for (size_t i = 0; i < a.chambers.size(); ++i) {
    if (drop_ch_a.count(i)) continue;
    const auto& ch = a.chambers[i];
    out.chambers.push_back({"a:" + ch.id, map_labels(sorted_labels(ch.labels), true), ch.w_plus,
                            ch.w_minus});
  }
  for (size_t i = 0; i < b.chambers.size(); ++i) {
    if (drop_ch_b.count(i)) continue;
    const auto& ch = b.chambers[i];
    out.chambers.push_back({"b:" + ch.id, map_labels(sorted_labels(ch.labels), false), ch.w_plus,
                            ch.w_minus});
  }
  close_faces(out);
  return out;
}

}  // namespace

MultiFan diamond(const MultiFan& a, const MultiFan& b, const std::string& L,
                 const std::string& L2) {
  if (a.dim != b.dim) throw DomainError("DimensionMismatch", "diamond of fans with different dimensions");
  const Vec& vL = a.edge_vector(L);
  const Vec& vL2 = b.edge_vector(L2);
  if (vL != vL2)
    throw DomainError("NeighborhoodMismatch", "folded edges carry different vectors " +
                                                  vec_to_string(vL) + " vs " + vec_to_string(vL2));

  DiamondSide sa = collect_neighborhood(a, L);
  DiamondSide sb = collect_neighborhood(b, L2);

  // Group the removed chambers by geometric cone.
  std::map<std::vector<Vec>, std::vector<size_t>> ga, gb;
  for (size_t i : sa.removed_chambers) ga[cone_signature(a, sorted_labels(a.chambers[i].labels))].push_back(i);
  for (size_t i : sb.removed_chambers) gb[cone_signature(b, sorted_labels(b.chambers[i].labels))].push_back(i);
  {
    auto sigs = [](const auto& g) {
      std::vector<std::pair<std::vector<Vec>, size_t>> s;
      for (const auto& [k, v] : g) s.push_back({k, v.size()});
      return s;
    };
    if (sigs(ga) != sigs(gb))
      throw DomainError("NeighborhoodMismatch", "cone sets around the folded edges differ");
  }
  {
    std::set<std::vector<Vec>> fa, fb;
    for (const auto& f : sa.removed_faces) fa.insert(cone_signature(a, f));
    for (const auto& f : sb.removed_faces) fb.insert(cone_signature(b, f));
    if (fa != fb)
      throw DomainError("NeighborhoodMismatch", "face cones around the folded edges differ");
  }

  UnionFind uf;
  for (auto& [sig, ia] : ga) {
    auto& ib = gb[sig];
    // Pair chambers so that weights satisfy w = w' swapped.
    auto wkey_a = [&](size_t i) {
      return std::make_pair(a.chambers[i].w_plus, a.chambers[i].w_minus);
    };
    auto wkey_b = [&](size_t i) {
      return std::make_pair(b.chambers[i].w_minus, b.chambers[i].w_plus);
    };
    std::sort(ia.begin(), ia.end(), [&](size_t x, size_t y) { return wkey_a(x) < wkey_a(y); });
    std::sort(ib.begin(), ib.end(), [&](size_t x, size_t y) { return wkey_b(x) < wkey_b(y); });
    for (size_t t = 0; t < ia.size(); ++t)
      if (wkey_a(ia[t]) != wkey_b(ib[t]))
        throw DomainError("WeightMismatch",
                          "weights around the folded edges are not opposite");
    for (size_t t = 0; t < ia.size(); ++t) {
      const auto& ca = a.chambers[ia[t]];
      const auto& cb = b.chambers[ib[t]];
      for (const std::string& la : ca.labels) {
        if (la == L) continue;
        const Vec& va = a.edge_vector(la);
        bool matched = false;
        for (const std::string& lb : cb.labels) {
          if (lb == L2) continue;
          if (b.edge_vector(lb) == va) {
            uf.unite("a:" + la, "b:" + lb);
            matched = true;
            break;
          }
        }
        if (!matched)
          throw DomainError("NeighborhoodMismatch", "boundary edge has no geometric partner");
      }
    }
  }

  std::set<std::string> drop_a{L}, drop_b{L2};
  std::set<size_t> dca(sa.removed_chambers.begin(), sa.removed_chambers.end());
  std::set<size_t> dcb(sb.removed_chambers.begin(), sb.removed_chambers.end());
  return canonicalize(rebuild_union(a, b, drop_a, drop_b, dca, dcb, uf));
}

MultiFan blow_up(const MultiFan& mf, const std::string& chamber_id, int sign) {
  const WeightedChamber* target = mf.find_chamber(chamber_id);
  if (!target) throw DomainError("ChamberNotPresent", "no chamber with id '" + chamber_id + "'");
  if (sign != 1 && sign != -1) throw DomainError("BadSign", "blow-up sign must be +1 or -1");
  if (sign == 1 && target->w_plus < 1)
    throw DomainError("InsufficientWeight", "chamber has w+ = 0");
  if (sign == -1 && target->w_minus < 1)
    throw DomainError("InsufficientWeight", "chamber has w- = 0");

  std::vector<std::string> labels = sorted_labels(target->labels);
  Vec sum(mf.dim, Int(0));
  for (const std::string& l : labels) sum = vec_add(sum, mf.edge_vector(l));
  Vec new_vec = primitive(sum);

  std::string new_label;
  for (int k = 1;; ++k) {
    new_label = "b" + std::to_string(k);
    if (!mf.edges.count(new_label)) break;
  }

  MultiFan out = mf;
  out.edges[new_label] = new_vec;

  out.chambers.clear();
  for (const auto& ch : mf.chambers) {
    if (ch.id != chamber_id) {
      out.chambers.push_back(ch);
      continue;
    }
    if (ch.w_plus + ch.w_minus > 1) {
      WeightedChamber kept = ch;
      (sign == 1 ? kept.w_plus : kept.w_minus) -= 1;
      out.chambers.push_back(kept);
    }
  }
  int idx = 0;
  for (const std::string& l : labels) {
    std::vector<std::string> sub = labels;
    sub.erase(std::find(sub.begin(), sub.end(), l));
    sub.push_back(new_label);
    std::sort(sub.begin(), sub.end());
    WeightedChamber nc;
    nc.id = chamber_id + ":b" + std::to_string(idx++);
    nc.labels = sub;
    nc.w_plus = sign == 1 ? 1 : 0;
    nc.w_minus = sign == 1 ? 0 : 1;
    out.chambers.push_back(std::move(nc));
  }

  bool cone_still_present = false;
  for (const auto& ch : out.chambers)
    if (sorted_labels(ch.labels) == labels) cone_still_present = true;
  if (!cone_still_present) out.faces.erase(labels);
  close_faces(out);
  return out;
}

MultiFan connected_sum(const MultiFan& a, const MultiFan& b, const std::string& c,
                       const std::string& c2, bool reduce) {
  if (a.dim != b.dim)
    throw DomainError("DimensionMismatch", "connected sum of fans with different dimensions");
  const WeightedChamber* ca = a.find_chamber(c);
  const WeightedChamber* cb = b.find_chamber(c2);
  if (!ca || !cb) throw DomainError("ChamberNotPresent", "chamber id not found");
  std::vector<std::string> la = sorted_labels(ca->labels);
  std::vector<std::string> lb = sorted_labels(cb->labels);
  if (cone_signature(a, la) != cone_signature(b, lb))
    throw DomainError("ConeMismatch", "the two chambers span different cones");

  UnionFind uf;
  for (const std::string& x : la) {
    const Vec& vx = a.edge_vector(x);
    for (const std::string& y : lb)
      if (b.edge_vector(y) == vx) {
        uf.unite("a:" + x, "b:" + y);
        break;
      }
  }

  Int wp = ca->w_plus + cb->w_plus;
  Int wm = ca->w_minus + cb->w_minus;
  if (reduce) {
    Int m = wp < wm ? wp : wm;
    wp -= m;
    wm -= m;
  }

  size_t ia = 0, ib = 0;
  for (size_t i = 0; i < a.chambers.size(); ++i)
    if (a.chambers[i].id == c) ia = i;
  for (size_t i = 0; i < b.chambers.size(); ++i)
    if (b.chambers[i].id == c2) ib = i;

  MultiFan out = rebuild_union(a, b, {}, {}, {ia}, {ib}, uf);
  std::vector<std::string> merged_labels;
  for (const std::string& x : la) merged_labels.push_back(uf.find("a:" + x));
  std::sort(merged_labels.begin(), merged_labels.end());
  if (wp != 0 || wm != 0) {
    out.chambers.push_back({"sum:" + c, merged_labels, wp, wm});
  } else {
    // The identified cone vanishes; drop it from the top of the face poset
    // unless some surviving chamber still spans it.
    bool still = false;
    for (const auto& ch : out.chambers)
      if (sorted_labels(ch.labels) == merged_labels) still = true;
    if (!still) out.faces.erase(merged_labels);
  }
  close_faces(out);
  return canonicalize(out);
}

MultiFan merge(const MultiFan& mf) {
  // Unify equal-vector edges (valid fans never put equal vectors in one face).
  std::map<Vec, std::string> rep;
  for (const auto& [l, v] : mf.edges)
    if (!rep.count(v)) rep[v] = l;
  auto map_label = [&](const std::string& l) { return rep.at(mf.edge_vector(l)); };

  MultiFan out;
  out.dim = mf.dim;
  for (const auto& [v, l] : rep) out.edges[l] = v;
  for (const auto& face : mf.faces) {
    std::vector<std::string> mapped;
    for (const std::string& l : face) mapped.push_back(map_label(l));
    std::sort(mapped.begin(), mapped.end());
    mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
    out.faces.insert(mapped);
  }
  std::map<std::vector<std::string>, std::pair<Int, Int>> grouped;
  for (const auto& ch : mf.chambers) {
    std::vector<std::string> mapped;
    for (const std::string& l : ch.labels) mapped.push_back(map_label(l));
    std::sort(mapped.begin(), mapped.end());
    auto& w = grouped[mapped];
    w.first += ch.w_plus;
    w.second += ch.w_minus;
  }
  int k = 0;
  for (const auto& [labels, w] : grouped)
    out.chambers.push_back({"m" + std::to_string(++k), labels, w.first, w.second});
  close_faces(out);
  return canonicalize(out);
}

namespace {

std::string chamber_descriptor(const MultiFan& mf, const WeightedChamber& ch) {
  std::ostringstream out;
  for (const Vec& v : cone_signature(mf, sorted_labels(ch.labels))) out << vec_to_string(v);
  out << "|" << ch.w_plus << "," << ch.w_minus;
  return out.str();
}

}  // namespace

bool isomorphic(const MultiFan& a, const MultiFan& b) {
  if (a.dim != b.dim || a.edges.size() != b.edges.size() ||
      a.chambers.size() != b.chambers.size() || a.faces.size() != b.faces.size())
    return false;
  {
    std::multiset<Vec> va, vb;
    for (const auto& [l, v] : a.edges) va.insert(v);
    for (const auto& [l, v] : b.edges) vb.insert(v);
    if (va != vb) return false;
    std::multiset<std::string> da, db;
    for (const auto& ch : a.chambers) da.insert(chamber_descriptor(a, ch));
    for (const auto& ch : b.chambers) db.insert(chamber_descriptor(b, ch));
    if (da != db) return false;
  }

  std::vector<std::string> la;
  for (const auto& [l, v] : a.edges) la.push_back(l);
  std::map<std::string, std::vector<std::string>> candidates;
  for (const std::string& l : la) {
    const Vec& v = a.edges.at(l);
    for (const auto& [l2, v2] : b.edges)
      if (v2 == v) candidates[l].push_back(l2);
  }
  // Most constrained labels first.
  std::sort(la.begin(), la.end(), [&](const std::string& x, const std::string& y) {
    return candidates[x].size() < candidates[y].size();
  });

  std::map<std::string, std::string> assign;
  std::set<std::string> used;

  auto full_check = [&]() {
    std::set<std::vector<std::string>> mapped_faces;
    for (const auto& face : a.faces) {
      std::vector<std::string> m;
      for (const std::string& l : face) m.push_back(assign.at(l));
      std::sort(m.begin(), m.end());
      mapped_faces.insert(m);
    }
    if (mapped_faces != b.faces) return false;
    std::multiset<std::string> ca, cb;
    for (const auto& ch : a.chambers) {
      std::vector<std::string> m;
      for (const std::string& l : ch.labels) m.push_back(assign.at(l));
      std::sort(m.begin(), m.end());
      std::ostringstream s;
      for (const auto& l : m) s << l << ";";
      s << ch.w_plus << "," << ch.w_minus;
      ca.insert(s.str());
    }
    for (const auto& ch : b.chambers) {
      std::vector<std::string> m = sorted_labels(ch.labels);
      std::ostringstream s;
      for (const auto& l : m) s << l << ";";
      s << ch.w_plus << "," << ch.w_minus;
      cb.insert(s.str());
    }
    return ca == cb;
  };

  std::function<bool(size_t)> dfs = [&](size_t i) -> bool {
    if (i == la.size()) return full_check();
    for (const std::string& cand : candidates[la[i]]) {
      if (used.count(cand)) continue;
      assign[la[i]] = cand;
      used.insert(cand);
      if (dfs(i + 1)) return true;
      used.erase(cand);
      assign.erase(la[i]);
    }
    return false;
  };
  return dfs(0);
}

std::optional<std::map<std::string, int>> equivalent_up_to_signs(const MultiFan& a,
                                                                 const MultiFan& b,
                                                                 int max_edges) {
  if (a.dim != b.dim || a.edges.size() != b.edges.size()) return std::nullopt;
  int n = static_cast<int>(a.edges.size());
  if (n > max_edges)
    throw DomainError("TooLarge", "sign search over " + std::to_string(n) + " edges exceeds bound " +
                                      std::to_string(max_edges));
  std::vector<std::string> labels;
  for (const auto& [l, v] : a.edges) labels.push_back(l);
  MultiFan mb = merge(b);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    MultiFan flipped = a;
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) flipped = flip_edge(flipped, labels[i]);
    if (isomorphic(merge(flipped), mb)) {
      std::map<std::string, int> signs;
      for (int i = 0; i < n; ++i)
        signs[labels[i]] = (mask & (std::uint64_t(1) << i)) ? -1 : 1;
      return signs;
    }
  }
  return std::nullopt;
}

MultiFan canonicalize(const MultiFan& mf) {
  // Edge sort key: vector, then incident chamber descriptors, then old label.
  std::map<std::string, std::string> incidence;
  for (const auto& [l, v] : mf.edges) {
    std::vector<std::string> ds;
    for (const auto& ch : mf.chambers)
      if (contains_label(sorted_labels(ch.labels), l)) ds.push_back(chamber_descriptor(mf, ch));
    std::sort(ds.begin(), ds.end());
    std::string joined;
    for (const auto& d : ds) joined += d + "#";
    incidence[l] = joined;
  }
  std::vector<std::string> order;
  for (const auto& [l, v] : mf.edges) order.push_back(l);
  std::sort(order.begin(), order.end(), [&](const std::string& x, const std::string& y) {
    const Vec& vx = mf.edges.at(x);
    const Vec& vy = mf.edges.at(y);
    if (vx != vy) return vec_lex_less(vx, vy);
    if (incidence[x] != incidence[y]) return incidence[x] < incidence[y];
    return x < y;
  });
  std::map<std::string, std::string> rename;
  for (size_t i = 0; i < order.size(); ++i) rename[order[i]] = "e" + std::to_string(i + 1);

  MultiFan out;
  out.dim = mf.dim;
  for (const auto& [l, v] : mf.edges) out.edges[rename[l]] = v;
  for (const auto& face : mf.faces) {
    std::vector<std::string> m;
    for (const std::string& l : face) m.push_back(rename[l]);
    std::sort(m.begin(), m.end());
    out.faces.insert(m);
  }
  std::vector<WeightedChamber> chs;
  for (const auto& ch : mf.chambers) {
    std::vector<std::string> m;
    for (const std::string& l : ch.labels) m.push_back(rename[l]);
    std::sort(m.begin(), m.end());
    chs.push_back({ch.id, m, ch.w_plus, ch.w_minus});
  }
  std::sort(chs.begin(), chs.end(), [](const WeightedChamber& x, const WeightedChamber& y) {
    if (x.labels != y.labels) return x.labels < y.labels;
    if (x.w_plus != y.w_plus) return x.w_plus < y.w_plus;
    if (x.w_minus != y.w_minus) return x.w_minus < y.w_minus;
    return x.id < y.id;
  });
  for (size_t i = 0; i < chs.size(); ++i) chs[i].id = "c" + std::to_string(i + 1);
  out.chambers = std::move(chs);
  return out;
}

}  // namespace origami
