#ifndef ORIGAMIFAN_POLYTOPE_HPP
#define ORIGAMIFAN_POLYTOPE_HPP

#include <string>
#include <vector>

#include "origamifan/multifan.hpp"

namespace origami {

// One halfspace {x : <normal, x> + offset >= 0}; normals point inward.
struct Facet {
  Vec normal;
  Rat offset;
  bool operator==(const Facet& other) const = default;
};

struct DelzantPolytope {
  int dim = 0;
  std::vector<Facet> facets;
  bool operator==(const DelzantPolytope& other) const = default;
};

struct VertexInfo {
  QVec point;
  std::vector<int> facets;  // sorted indices of all facets through the point
};

// All vertices with incidences, by exact n-subset solving.
// Throws Unbounded or Empty.
std::vector<VertexInfo> vertices(const DelzantPolytope& p);

struct DelzantReport {
  bool delzant = true;
  std::vector<std::string> issues;
};

// Checks boundedness, full dimension, supporting facets, simplicity and the
// vertex Z-basis condition.
DelzantReport is_delzant(const DelzantPolytope& p);

// Normal fan with one chamber per vertex; weights (1,0) for orientation +1,
// (0,1) for -1. Throws NotDelzant.
MultiFan normal_fan(const DelzantPolytope& p, int orientation);

// Largest depth at which a cut at this vertex stays strictly clear of every
// other vertex (measured in the lattice-affine coordinate along the summed
// normal).
Rat max_chop_depth(const DelzantPolytope& p, int vertex_index);

// Cut the vertex by the facet whose normal is the sum of the vertex's
// incident normals, at the given lattice-affine depth. The new facet is
// appended at the end of the facet list. Throws DepthTooLarge.
DelzantPolytope corner_chop(const DelzantPolytope& p, int vertex_index, const Rat& depth);

DelzantPolytope product(const DelzantPolytope& p, const DelzantPolytope& q);

// Facets sharing a face with the given facet.
std::vector<int> facet_neighbors(const DelzantPolytope& p, int facet);

// Lattice-affine image x -> M x + b (M unimodular).
DelzantPolytope transform(const DelzantPolytope& p, const Mat& m, const QVec& b);

std::vector<int> facets_through(const DelzantPolytope& p, const QVec& point);

}  // namespace origami

#endif
