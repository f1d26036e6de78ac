#ifndef ORIGAMIFAN_LATTICE_HPP
#define ORIGAMIFAN_LATTICE_HPP

#include <optional>
#include <vector>

#include "origamifan/numeric.hpp"

namespace origami {

// gcd of coordinates, nonnegative; 0 for the zero vector.
Int vec_gcd(const Vec& v);

bool is_primitive(const Vec& v);

// v divided by the gcd of its coordinates. Throws ZeroVector.
Vec primitive(const Vec& v);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_neg(const Vec& a);
Vec vec_scale(const Int& k, const Vec& a);

// Integer matrix, row-major.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}

  Int& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Int& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Mat identity(int n);
  static Mat from_columns(const std::vector<Vec>& columns);

  Vec column(int j) const;
  Vec row(int i) const;
  Mat transposed() const;
  Mat operator*(const Mat& other) const;
  Vec apply(const Vec& v) const;   // matrix * column vector
  QVec apply(const QVec& v) const;
  bool operator==(const Mat& other) const = default;
};

// Exact determinant of the matrix whose columns are vs (Bareiss).
// Throws DimensionMismatch unless vs is n vectors of dimension n.
Int det(const std::vector<Vec>& vs);
Int det(const Mat& m);

// Rank over Q of the span of the given vectors.
int rank_of(const std::vector<Vec>& vectors);

// Exact inverse of a unimodular integer matrix. Throws NotUnimodular.
Mat unimodular_inverse(const Mat& m);

// U * m * V = D with U, V unimodular and D diagonal, nonnegative,
// d1 | d2 | ... down the diagonal.
struct SmithForm {
  Mat u;
  Mat d;
  Mat v;
};
SmithForm smith_normal_form(const Mat& m);

// Finitely generated abelian group in Smith canonical form:
// Z^free_rank x Z/t1 x ... with 2 <= t1 | t2 | ...
struct AbelianGroupSNF {
  int free_rank = 0;
  std::vector<Int> torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  std::string to_string() const;  // "1", "Z", "Z/2", "Z x Z/3", ...
  bool operator==(const AbelianGroupSNF& other) const = default;
};

// Structure of Z^ambient_rank modulo the sublattice spanned by the generators.
AbelianGroupSNF quotient_group(const std::vector<Vec>& generators, int ambient_rank);

// Basis of the sublattice spanned by the generators (as matrix columns)
// together with the quotient structure.
struct SublatticeInfo {
  Mat basis;  // ambient_rank x rank
  int rank = 0;
  AbelianGroupSNF quotient;
};
SublatticeInfo sublattice_info(const std::vector<Vec>& generators, int ambient_rank);

// True iff the vectors extend to a Z-basis of Z^ambient_rank
// (all Smith diagonal entries equal 1).
bool extends_to_basis(const std::vector<Vec>& vectors, int ambient_rank);

// Solve [columns] * x = rhs exactly; nullopt if the matrix is singular.
std::optional<QVec> solve_columns(const std::vector<Vec>& columns, const QVec& rhs);

// Quotient projection onto Z^(n-k) by the saturation of span(generators):
// the last n-k rows of the Smith U factor. Generators must be independent.
Mat quotient_projection(const std::vector<Vec>& generators, int ambient_rank);

}  // namespace origami

#endif
