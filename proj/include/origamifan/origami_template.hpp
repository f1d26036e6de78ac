#ifndef ORIGAMIFAN_ORIGAMI_TEMPLATE_HPP
#define ORIGAMIFAN_ORIGAMI_TEMPLATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "origamifan/polytope.hpp"

namespace origami {

struct FacetRef {
  int poly = 0;
  int facet = 0;
  auto operator<=>(const FacetRef&) const = default;
};

struct VertexRef {
  int poly = 0;
  int vertex = 0;  // index into vertices(polytope), canonical order
};

// Either a pair of facets glued to each other, or a single folded facet
// (the non-coorientable case).
struct FoldEntry {
  bool single = false;
  FacetRef a;
  FacetRef b;  // meaningful only when !single
};

struct OrientedPolytope {
  DelzantPolytope polytope;
  int orientation = 0;  // +1, -1, or 0 for none
};

struct OrigamiTemplate {
  int dim = 0;
  std::vector<OrientedPolytope> polytopes;
  std::vector<FoldEntry> folds;
};

// O1 (local agreement near each fold pair), O2 (isolation of folded facets),
// O3 (connectivity of the glued space). Violations are data, not failures.
ValidationReport validate_template(const OrigamiTemplate& t);

struct TemplateClass {
  bool cooriented = false;
  bool oriented = false;
  bool acyclic = false;
};
TemplateClass classify(const OrigamiTemplate& t);

struct TemplateGraph {
  int vertices = 0;
  int pair_edges = 0;
  int components = 0;
  int b1 = 0;
};
TemplateGraph template_graph(const OrigamiTemplate& t);

// The multi-fan of an oriented template: disjoint union of the polytopes'
// normal fans with one diamond operation per pair fold. Throws NotOriented
// or DiamondPreconditionFailed.
MultiFan multifan_of_template(const OrigamiTemplate& t);

// Union template with a new fold pair at two non-folded facets whose germs
// agree; hosts must carry opposite orientations. Throws NotNonFolded,
// NeighborhoodMismatch or SameOrientation.
OrigamiTemplate template_diamond(const OrigamiTemplate& t, const OrigamiTemplate& t2,
                                 FacetRef f, FacetRef f2);

// Chop matching corners at equal depth, translate the second template onto
// the first, and fold the created facets. Throws VertexOnFold, ConeMismatch
// or SameOrientation.
OrigamiTemplate template_connected_sum(const OrigamiTemplate& t, const OrigamiTemplate& t2,
                                       VertexRef v, VertexRef v2);

// Two standard n-simplices with opposite orientations folded along the
// diagonal facet; n = 2 is the S^4 template. (n >= 3 follows the same
// two-simplex pattern.)
OrigamiTemplate sphere_template(int n);

// Replace every polytope by its product with q; fold facet indices are
// preserved.
OrigamiTemplate product_with_delzant(const OrigamiTemplate& t, const DelzantPolytope& q);

// Number of polytope vertices lying on no folded facet.
int count_fixed_points(const OrigamiTemplate& t);

// Every nonempty intersection of glued facet classes of |(P,F)| is connected
// and contains an off-fold vertex.
bool faces_connected(const OrigamiTemplate& t);

// Facet classes of the glued space: non-folded facets identified across
// folds. Each class is a sorted list of facet refs.
std::vector<std::vector<FacetRef>> glued_facet_classes(const OrigamiTemplate& t);

// Lattice-affine image of every polytope: x -> M x + b.
OrigamiTemplate transform_template(const OrigamiTemplate& t, const Mat& m, const QVec& b);

// Corner chop of one polytope inside a template; returns the template and
// the index of the created facet.
OrigamiTemplate chop_template(const OrigamiTemplate& t, const VertexRef& v, const Rat& depth,
                              int* new_facet_index = nullptr);

bool facet_is_folded(const OrigamiTemplate& t, FacetRef f);

// Not folded and touching no folded facet of the same polytope.
bool facet_non_folded(const OrigamiTemplate& t, FacetRef f);

OrigamiTemplate flip_orientations(const OrigamiTemplate& t);

}  // namespace origami

#endif
