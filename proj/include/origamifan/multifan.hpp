#ifndef ORIGAMIFAN_MULTIFAN_HPP
#define ORIGAMIFAN_MULTIFAN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "origamifan/lattice.hpp"

namespace origami {

// Top-dimensional cone with multiplicity data. Two weights: w_plus counts
// fixed points whose orientation ratio is +1, w_minus the others.
struct WeightedChamber {
  std::string id;
  std::vector<std::string> labels;  // sorted edge labels, size = dim
  Int w_plus = 0;
  Int w_minus = 0;
  bool operator==(const WeightedChamber& other) const = default;
};

// Labeled simplicial multi-fan. `faces` is the poset below (and including)
// the chamber label sets, closed under subsets, with {} as the minimum;
// chambers carry the top-dimensional multiplicity and weights.
struct MultiFan {
  int dim = 0;
  std::map<std::string, Vec> edges;
  std::set<std::vector<std::string>> faces;
  std::vector<WeightedChamber> chambers;

  const Vec& edge_vector(const std::string& label) const;
  std::vector<Vec> vectors_of(const std::vector<std::string>& labels) const;
  const WeightedChamber* find_chamber(const std::string& id) const;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
};

// Close a face list under subsets (including the empty face) and all
// subsets of the chamber label sets.
void close_faces(MultiFan& mf);

ValidationReport validate(const MultiFan& mf);

bool is_nonsingular(const MultiFan& mf);

// Common value of d_v over all generic directions; exact arrangement scan in
// dimensions <= 3, seeded sampling above. Throws EmptyTopDimension or
// NotPreComplete (message carries two disagreeing witnesses).
Int degree(const MultiFan& mf, std::uint64_t seed = 0);

// degree() as a value; on failure returns nullopt and stores the error.
std::optional<Int> try_degree(const MultiFan& mf, std::string* error = nullptr,
                              std::uint64_t seed = 0);

// Projected multi-fan with respect to face K: lives in the quotient lattice
// by the span of C(K). Throws FaceNotPresent.
MultiFan projected(const MultiFan& mf, const std::vector<std::string>& K);

// Pre-complete, and every projected multi-fan is pre-complete.
bool is_complete(const MultiFan& mf, std::uint64_t seed = 0);

// Negate one edge vector and swap the weights on incident chambers.
MultiFan flip_edge(const MultiFan& mf, const std::string& label);

// Negate all edge vectors and swap all weights (orientation reversal).
MultiFan flip_global(const MultiFan& mf);

// Swap all weight pairs only (all polytope orientations reversed).
MultiFan flip_weights(const MultiFan& mf);

// Diamond operation at edges L and L2: removes both neighborhoods and glues
// the boundary cones, matching by geometry. Throws NeighborhoodMismatch or
// WeightMismatch.
MultiFan diamond(const MultiFan& mf, const MultiFan& mf2, const std::string& L,
                 const std::string& L2);

// Stellar subdivision of a chamber's cone; sign +1 consumes a unit of w_plus,
// -1 a unit of w_minus. Throws ChamberNotPresent or InsufficientWeight.
MultiFan blow_up(const MultiFan& mf, const std::string& chamber_id, int sign);

// Identify the two chambers' cones; identified weight is the componentwise
// sum, reduced by min(w+,w-) unless reduce=false. A (0,0) result removes
// the chamber. Throws ConeMismatch.
MultiFan connected_sum(const MultiFan& mf, const MultiFan& mf2, const std::string& c,
                       const std::string& c2, bool reduce = true);

// Unify equal-vector edges, merge chambers on identical cones by summing
// weights, relabel canonically.
MultiFan merge(const MultiFan& mf);

// Label bijection preserving vectors, faces, chambers and weights.
bool isomorphic(const MultiFan& a, const MultiFan& b);

// Search over per-edge sign flips of `a` for one making merge(flipped a)
// isomorphic to merge(b). Exhaustive in 2^edges; throws TooLarge above the
// bound. Returns nullopt when no assignment exists.
std::optional<std::map<std::string, int>> equivalent_up_to_signs(
    const MultiFan& a, const MultiFan& b, int max_edges = 20);

// Deterministic relabel: edges sorted lexicographically by vector (ties by
// incidence then input label), chambers by sorted label sets then weights.
MultiFan canonicalize(const MultiFan& mf);

}  // namespace origami

#endif
