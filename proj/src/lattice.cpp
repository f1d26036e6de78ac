#include "origamifan/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace origami {

std::string rat_to_string(const Rat& q) {
  std::ostringstream out;
  out << numerator(q);
  if (denominator(q) != 1) out << "/" << denominator(q);
  return out.str();
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    return make_rat(num, den);
  } catch (const std::exception&) {
    throw DomainError("BadRational", "cannot parse rational '" + s + "'");
  }
}

std::string vec_to_string(const Vec& v) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << v[i];
  }
  out << ")";
  return out.str();
}

std::string qvec_to_string(const QVec& v) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << rat_to_string(v[i]);
  }
  out << ")";
  return out.str();
}

Int vec_gcd(const Vec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

bool is_primitive(const Vec& v) { return vec_gcd(v) == 1; }

Vec primitive(const Vec& v) {
  Int g = vec_gcd(v);
  if (g == 0) throw DomainError("ZeroVector", "primitive() of the zero vector");
  Vec out = v;
  for (Int& x : out) x /= g;
  return out;
}

Vec vec_add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DomainError("DimensionMismatch", "vector sizes differ");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DomainError("DimensionMismatch", "vector sizes differ");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_neg(const Vec& a) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

Vec vec_scale(const Int& k, const Vec& a) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = k * a[i];
  return out;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& columns) {
  int c = static_cast<int>(columns.size());
  int r = c == 0 ? 0 : static_cast<int>(columns[0].size());
  Mat m(r, c);
  for (int j = 0; j < c; ++j) {
    if (static_cast<int>(columns[j].size()) != r)
      throw DomainError("DimensionMismatch", "ragged column list");
    for (int i = 0; i < r; ++i) m.at(i, j) = columns[j][i];
  }
  return m;
}

Vec Mat::column(int j) const {
  Vec v(rows);
  for (int i = 0; i < rows; ++i) v[i] = at(i, j);
  return v;
}

Vec Mat::row(int i) const {
  Vec v(cols);
  for (int j = 0; j < cols; ++j) v[j] = at(i, j);
  return v;
}

Mat Mat::transposed() const {
  Mat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

Mat Mat::operator*(const Mat& other) const {
  if (cols != other.rows) throw DomainError("DimensionMismatch", "matrix product shapes");
  Mat out(rows, other.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Int& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < other.cols; ++j) out.at(i, j) += x * other.at(k, j);
    }
  return out;
}

Vec Mat::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != cols)
    throw DomainError("DimensionMismatch", "matrix apply size");
  Vec out(rows, Int(0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out[i] += at(i, j) * v[j];
  return out;
}

QVec Mat::apply(const QVec& v) const {
  if (static_cast<int>(v.size()) != cols)
    throw DomainError("DimensionMismatch", "matrix apply size");
  QVec out(rows, Rat(0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out[i] += Rat(at(i, j)) * v[j];
  return out;
}

Int det(const Mat& m) {
  if (m.rows != m.cols) throw DomainError("DimensionMismatch", "determinant of non-square matrix");
  int n = m.rows;
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  Mat w = m;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (w.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
      }
      w.at(i, k) = 0;
    }
    prev = w.at(k, k);
  }
  return sign > 0 ? w.at(n - 1, n - 1) : Int(-w.at(n - 1, n - 1));
}

Int det(const std::vector<Vec>& vs) {
  if (vs.empty()) return 1;
  size_t n = vs[0].size();
  if (vs.size() != n)
    throw DomainError("DimensionMismatch", "det needs n vectors of dimension n");
  for (const Vec& v : vs)
    if (v.size() != n) throw DomainError("DimensionMismatch", "det needs n vectors of dimension n");
  return det(Mat::from_columns(vs));
}

int rank_of(const std::vector<Vec>& vectors) {
  if (vectors.empty()) return 0;
  size_t n = vectors[0].size();
  std::vector<QVec> rowsq;
  for (const Vec& v : vectors) {
    if (v.size() != n) throw DomainError("DimensionMismatch", "ragged vector list");
    QVec r(n);
    for (size_t i = 0; i < n; ++i) r[i] = Rat(v[i]);
    rowsq.push_back(std::move(r));
  }
  int rank = 0;
  size_t col = 0;
  while (col < n && rank < static_cast<int>(rowsq.size())) {
    int pivot = -1;
    for (size_t i = rank; i < rowsq.size(); ++i)
      if (rowsq[i][col] != 0) { pivot = static_cast<int>(i); break; }
    if (pivot < 0) { ++col; continue; }
    std::swap(rowsq[rank], rowsq[pivot]);
    for (size_t i = 0; i < rowsq.size(); ++i) {
      if (static_cast<int>(i) == rank || rowsq[i][col] == 0) continue;
      Rat f = rowsq[i][col] / rowsq[rank][col];
      for (size_t j = col; j < n; ++j) rowsq[i][j] -= f * rowsq[rank][j];
    }
    ++rank;
    ++col;
  }
  return rank;
}

Mat unimodular_inverse(const Mat& m) {
  if (m.rows != m.cols) throw DomainError("DimensionMismatch", "inverse of non-square matrix");
  Int d = det(m);
  if (d != 1 && d != -1)
    throw DomainError("NotUnimodular", "matrix determinant is not +-1");
  int n = m.rows;
  // Gauss-Jordan over Q; entries of the inverse are integers since |det| = 1.
  std::vector<QVec> w(n, QVec(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w[i][j] = Rat(m.at(i, j));
    w[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (w[i][c] != 0) { p = i; break; }
    std::swap(w[c], w[p]);
    Rat inv = Rat(1) / w[c][c];
    for (int j = 0; j < 2 * n; ++j) w[c][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || w[i][c] == 0) continue;
      Rat f = w[i][c];
      for (int j = 0; j < 2 * n; ++j) w[i][j] -= f * w[c][j];
    }
  }
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rat& q = w[i][n + j];
      out.at(i, j) = numerator(q);  // denominator is 1
    }
  return out;
}

namespace {

struct SnfWork {
  Mat d, u, v;

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
    for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
    for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
  }
  // row[dst] += k * row[src]
  void row_addmul(int dst, int src, const Int& k) {
    for (int c = 0; c < d.cols; ++c) d.at(dst, c) += k * d.at(src, c);
    for (int c = 0; c < u.cols; ++c) u.at(dst, c) += k * u.at(src, c);
  }
  void col_addmul(int dst, int src, const Int& k) {
    for (int r = 0; r < d.rows; ++r) d.at(r, dst) += k * d.at(r, src);
    for (int r = 0; r < v.rows; ++r) v.at(r, dst) += k * v.at(r, src);
  }
  void row_negate(int i) {
    for (int c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
    for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
  }
};

}  // namespace

SmithForm smith_normal_form(const Mat& m) {
  SnfWork w;
  w.d = m;
  w.u = Mat::identity(m.rows);
  w.v = Mat::identity(m.cols);
  int n = std::min(m.rows, m.cols);

  for (int t = 0; t < n; ++t) {
    // Pivot on the least |entry| in the trailing submatrix.
    int pi = -1, pj = -1;
    for (int i = t; i < m.rows; ++i)
      for (int j = t; j < m.cols; ++j) {
        if (w.d.at(i, j) == 0) continue;
        if (pi < 0 || int_abs(w.d.at(i, j)) < int_abs(w.d.at(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);

    for (;;) {
      bool reduced = true;
      for (int i = t + 1; i < m.rows; ++i) {
        if (w.d.at(i, t) == 0) continue;
        Int q = w.d.at(i, t) / w.d.at(t, t);
        w.row_addmul(i, t, -q);
        if (w.d.at(i, t) != 0) {
          // Remainder is strictly smaller; make it the pivot and restart.
          w.row_swap(i, t);
          reduced = false;
        }
      }
      for (int j = t + 1; j < m.cols; ++j) {
        if (w.d.at(t, j) == 0) continue;
        Int q = w.d.at(t, j) / w.d.at(t, t);
        w.col_addmul(j, t, -q);
        if (w.d.at(t, j) != 0) {
          w.col_swap(j, t);
          reduced = false;
        }
      }
      if (!reduced) continue;

      // Divisibility: the pivot must divide the trailing submatrix.
      int bi = -1, bj = -1;
      for (int i = t + 1; i < m.rows && bi < 0; ++i)
        for (int j = t + 1; j < m.cols; ++j)
          if (w.d.at(i, j) % w.d.at(t, t) != 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi < 0) break;
      w.row_addmul(t, bi, 1);
    }
    if (w.d.at(t, t) < 0) w.row_negate(t);
  }
  return SmithForm{w.u, w.d, w.v};
}

std::string AbelianGroupSNF::to_string() const {
  if (is_trivial()) return "1";
  std::ostringstream out;
  bool first = true;
  auto sep = [&]() {
    if (!first) out << " x ";
    first = false;
  };
  if (free_rank == 1) {
    sep();
    out << "Z";
  } else if (free_rank > 1) {
    sep();
    out << "Z^" << free_rank;
  }
  for (const Int& t : torsion) {
    sep();
    out << "Z/" << t;
  }
  return out.str();
}

AbelianGroupSNF quotient_group(const std::vector<Vec>& generators, int ambient_rank) {
  for (const Vec& g : generators)
    if (static_cast<int>(g.size()) != ambient_rank)
      throw DomainError("DimensionMismatch", "generator dimension differs from ambient rank");
  if (generators.empty()) {
    AbelianGroupSNF g;
    g.free_rank = ambient_rank;
    return g;
  }
  Mat m = Mat::from_columns(generators);
  SmithForm snf = smith_normal_form(m);
  AbelianGroupSNF g;
  int r = 0;
  int n = std::min(m.rows, m.cols);
  for (int i = 0; i < n; ++i) {
    const Int& di = snf.d.at(i, i);
    if (di == 0) break;
    ++r;
    if (di > 1) g.torsion.push_back(di);
  }
  g.free_rank = ambient_rank - r;
  return g;
}

SublatticeInfo sublattice_info(const std::vector<Vec>& generators, int ambient_rank) {
  for (const Vec& g : generators)
    if (static_cast<int>(g.size()) != ambient_rank)
      throw DomainError("DimensionMismatch", "generator dimension differs from ambient rank");
  SublatticeInfo info;
  if (generators.empty()) {
    info.basis = Mat(ambient_rank, 0);
    info.rank = 0;
    info.quotient.free_rank = ambient_rank;
    return info;
  }
  Mat m = Mat::from_columns(generators);
  SmithForm snf = smith_normal_form(m);
  Mat uinv = unimodular_inverse(snf.u);
  int r = 0;
  int n = std::min(m.rows, m.cols);
  std::vector<Vec> basis_cols;
  AbelianGroupSNF g;
  for (int i = 0; i < n; ++i) {
    const Int& di = snf.d.at(i, i);
    if (di == 0) break;
    ++r;
    basis_cols.push_back(vec_scale(di, uinv.column(i)));
    if (di > 1) g.torsion.push_back(di);
  }
  g.free_rank = ambient_rank - r;
  info.basis = basis_cols.empty() ? Mat(ambient_rank, 0) : Mat::from_columns(basis_cols);
  info.rank = r;
  info.quotient = g;
  return info;
}

bool extends_to_basis(const std::vector<Vec>& vectors, int ambient_rank) {
  if (vectors.empty()) return true;
  for (const Vec& v : vectors)
    if (static_cast<int>(v.size()) != ambient_rank)
      throw DomainError("DimensionMismatch", "vector dimension differs from ambient rank");
  if (static_cast<int>(vectors.size()) > ambient_rank) return false;
  SmithForm snf = smith_normal_form(Mat::from_columns(vectors));
  for (size_t i = 0; i < vectors.size(); ++i)
    if (snf.d.at(static_cast<int>(i), static_cast<int>(i)) != 1) return false;
  return true;
}

std::optional<QVec> solve_columns(const std::vector<Vec>& columns, const QVec& rhs) {
  size_t n = rhs.size();
  if (columns.size() != n) throw DomainError("DimensionMismatch", "solve needs a square system");
  for (const Vec& c : columns)
    if (c.size() != n) throw DomainError("DimensionMismatch", "solve needs a square system");
  // Augmented Gaussian elimination over Q.
  std::vector<QVec> w(n, QVec(n + 1, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) w[i][j] = Rat(columns[j][i]);
    w[i][n] = rhs[i];
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    for (size_t i = c; i < n; ++i)
      if (w[i][c] != 0) { p = i; break; }
    if (p == n) return std::nullopt;
    std::swap(w[c], w[p]);
    Rat inv = Rat(1) / w[c][c];
    for (size_t j = c; j <= n; ++j) w[c][j] *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || w[i][c] == 0) continue;
      Rat f = w[i][c];
      for (size_t j = c; j <= n; ++j) w[i][j] -= f * w[c][j];
    }
  }
  QVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = w[i][n];
  return x;
}

Mat quotient_projection(const std::vector<Vec>& generators, int ambient_rank) {
  int k = static_cast<int>(generators.size());
  if (rank_of(generators) != k)
    throw DomainError("DimensionMismatch", "quotient projection needs independent generators");
  if (k == 0) return Mat::identity(ambient_rank);
  SmithForm snf = smith_normal_form(Mat::from_columns(generators));
  Mat proj(ambient_rank - k, ambient_rank);
  for (int i = 0; i < ambient_rank - k; ++i)
    for (int j = 0; j < ambient_rank; ++j) proj.at(i, j) = snf.u.at(k + i, j);
  return proj;
}

}  // namespace origami
