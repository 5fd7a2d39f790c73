#pragma once

// Dense exact linear algebra: matrices, reduced row echelon form, kernels,
// canonical subspaces and the operator-closure fixpoint (saturate) used for
// ideal closures and the Peiffer collapse.

#include "liexmod/scalar.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

using Vec = std::vector<Scalar>;

inline Vec zero_vec(const Field& fld, std::size_t n) { return Vec(n, fld.zero()); }

inline Vec unit_vec(const Field& fld, std::size_t n, std::size_t i) {
  Vec v = zero_vec(fld, n);
  v[i] = fld.one();
  return v;
}

inline bool is_zero_vec(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vec& add_scaled(Vec& dst, const Scalar& c, const Vec& src) {
  if (dst.size() != src.size()) throw std::logic_error("vector size mismatch");
  if (c.is_zero()) return dst;
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (!src[i].is_zero()) dst[i] += c * src[i];
  return dst;
}

inline Vec add(Vec a, const Vec& b) {
  if (a.size() != b.size()) throw std::logic_error("vector size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec sub(Vec a, const Vec& b) {
  if (a.size() != b.size()) throw std::logic_error("vector size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec scaled(const Scalar& c, Vec v) {
  for (auto& x : v) x *= c;
  return v;
}

inline Vec negated(Vec v) {
  for (auto& x : v) x = -x;
  return v;
}

class Matrix {
public:
  Matrix(const Field& fld, std::size_t rows, std::size_t cols)
      : m_fld(fld), m_rows(rows), m_cols(cols), m_a(rows * cols, fld.zero()) {}

  static Matrix identity(const Field& fld, std::size_t n) {
    Matrix m(fld, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = fld.one();
    return m;
  }

  static Matrix from_rows(const Field& fld, std::size_t cols, const std::vector<Vec>& rows) {
    Matrix m(fld, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::logic_error("row length mismatch");
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
  }

  const Field& field() const { return m_fld; }
  std::size_t rows() const { return m_rows; }
  std::size_t cols() const { return m_cols; }

  Scalar& at(std::size_t r, std::size_t c) { return m_a[r * m_cols + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return m_a[r * m_cols + c]; }

  Vec row(std::size_t r) const {
    return Vec(m_a.begin() + static_cast<long>(r * m_cols),
               m_a.begin() + static_cast<long>((r + 1) * m_cols));
  }
  Vec col(std::size_t c) const {
    Vec v;
    v.reserve(m_rows);
    for (std::size_t r = 0; r < m_rows; ++r) v.push_back(at(r, c));
    return v;
  }
  void set_col(std::size_t c, const Vec& v) {
    for (std::size_t r = 0; r < m_rows; ++r) at(r, c) = v[r];
  }

  Vec apply(const Vec& v) const {
    if (v.size() != m_cols) throw std::logic_error("matrix/vector size mismatch");
    Vec out = zero_vec(m_fld, m_rows);
    for (std::size_t c = 0; c < m_cols; ++c)
      if (!v[c].is_zero())
        for (std::size_t r = 0; r < m_rows; ++r)
          if (!at(r, c).is_zero()) out[r] += at(r, c) * v[c];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.m_cols != b.m_rows) throw std::logic_error("matrix product size mismatch");
    Matrix out(a.m_fld, a.m_rows, b.m_cols);
    for (std::size_t i = 0; i < a.m_rows; ++i)
      for (std::size_t k = 0; k < a.m_cols; ++k) {
        const Scalar& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.m_cols; ++j)
          if (!b.at(k, j).is_zero()) out.at(i, j) += aik * b.at(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.m_rows != b.m_rows || a.m_cols != b.m_cols)
      throw std::logic_error("matrix sum size mismatch");
    for (std::size_t i = 0; i < a.m_a.size(); ++i) a.m_a[i] += b.m_a[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.m_rows != b.m_rows || a.m_cols != b.m_cols)
      throw std::logic_error("matrix difference size mismatch");
    for (std::size_t i = 0; i < a.m_a.size(); ++i) a.m_a[i] -= b.m_a[i];
    return a;
  }

  bool is_zero() const {
    for (const auto& x : m_a)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.m_rows == b.m_rows && a.m_cols == b.m_cols && a.m_a == b.m_a;
  }

private:
  Field m_fld;
  std::size_t m_rows, m_cols;
  std::vector<Scalar> m_a;
};

struct RrefResult {
  Matrix mat;
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

// Unique reduced row echelon form; row space preserved, zero rows dropped.
inline RrefResult rref(Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
    Scalar inv = m.at(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m.at(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      Scalar f = m.at(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  Matrix out(m.field(), pivots.size(), m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = m.at(r, c);
  return RrefResult{std::move(out), std::move(pivots)};
}

// Canonical subspace of an ambient coordinate space: basis rows in rref.
// Two subspaces are equal iff their basis matrices are identical.
class Subspace {
public:
  Subspace(const Field& fld, std::size_t ambient)
      : m_ambient(ambient), m_basis(fld, 0, ambient) {}

  static Subspace span(const Field& fld, std::size_t ambient, const std::vector<Vec>& gens) {
    Subspace s(fld, ambient);
    auto rr = rref(Matrix::from_rows(fld, ambient, gens));
    s.m_basis = std::move(rr.mat);
    s.m_pivots = std::move(rr.pivots);
    return s;
  }

  static Subspace full(const Field& fld, std::size_t ambient) {
    Subspace s(fld, ambient);
    s.m_basis = Matrix::identity(fld, ambient);
    for (std::size_t i = 0; i < ambient; ++i) s.m_pivots.push_back(i);
    return s;
  }

  const Field& field() const { return m_basis.field(); }
  std::size_t ambient() const { return m_ambient; }
  std::size_t dim() const { return m_basis.rows(); }
  const Matrix& basis() const { return m_basis; }
  const std::vector<std::size_t>& pivots() const { return m_pivots; }
  Vec basis_row(std::size_t i) const { return m_basis.row(i); }

  // residue of v modulo the subspace (pivot coordinates eliminated)
  Vec reduce(Vec v) const {
    if (v.size() != m_ambient) throw std::logic_error("ambient dimension mismatch");
    for (std::size_t r = 0; r < m_basis.rows(); ++r) {
      const Scalar& c = v[m_pivots[r]];
      if (c.is_zero()) continue;
      Scalar f = c; // pivot entries are 1
      for (std::size_t j = m_pivots[r]; j < m_ambient; ++j)
        if (!m_basis.at(r, j).is_zero()) v[j] -= f * m_basis.at(r, j);
    }
    return v;
  }

  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

  bool contains(const Subspace& other) const {
    for (std::size_t r = 0; r < other.dim(); ++r)
      if (!contains(other.basis_row(r))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.m_ambient == b.m_ambient && a.m_basis == b.m_basis;
  }

private:
  std::size_t m_ambient;
  Matrix m_basis;
  std::vector<std::size_t> m_pivots;
};

// One exact solution of A x = b, if any.
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  auto rr = rref(std::move(aug));
  Vec x = zero_vec(a.field(), a.cols());
  for (std::size_t r = 0; r < rr.pivots.size(); ++r) {
    if (rr.pivots[r] == a.cols()) return std::nullopt; // inconsistent
    x[rr.pivots[r]] = rr.mat.at(r, a.cols());
  }
  return x;
}

// Null space of m, as a canonical subspace of the column space.
inline Subspace kernel(const Matrix& m) {
  auto rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> rows;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v = zero_vec(m.field(), m.cols());
    v[f] = m.field().one();
    for (std::size_t r = 0; r < rr.pivots.size(); ++r)
      v[rr.pivots[r]] = -rr.mat.at(r, f);
    rows.push_back(std::move(v));
  }
  return Subspace::span(m.field(), m.cols(), rows);
}

// Incrementally maintained echelon basis with a configurable pivot priority
// order over columns.  Rows are fully reduced against each other, so the
// final basis is canonical with respect to the chosen order.
class EchelonBasis {
public:
  EchelonBasis(const Field& fld, std::size_t ambient, std::vector<std::size_t> col_order = {})
      : m_fld(fld), m_ambient(ambient), m_order(std::move(col_order)) {
    if (m_order.empty())
      for (std::size_t i = 0; i < ambient; ++i) m_order.push_back(i);
    if (m_order.size() != ambient) throw std::logic_error("column order size mismatch");
  }

  std::size_t dim() const { return m_rows.size(); }
  std::size_t ambient() const { return m_ambient; }
  const std::vector<Vec>& rows() const { return m_rows; }
  const std::vector<std::size_t>& pivot_cols() const { return m_pivots; }

  // reduce v against the current rows; returns the residue
  Vec reduce(Vec v) const {
    for (std::size_t r = 0; r < m_rows.size(); ++r) {
      const Scalar& c = v[m_pivots[r]];
      if (c.is_zero()) continue;
      Scalar f = c;
      for (std::size_t j = 0; j < m_ambient; ++j)
        if (!m_rows[r][j].is_zero()) v[j] -= f * m_rows[r][j];
    }
    return v;
  }

  // true if the rank grew
  bool insert(Vec v) {
    v = reduce(std::move(v));
    std::size_t piv = m_ambient;
    for (std::size_t k = 0; k < m_order.size(); ++k) {
      if (!v[m_order[k]].is_zero()) { piv = m_order[k]; break; }
    }
    if (piv == m_ambient) return false;
    Scalar inv = v[piv].inverse();
    for (auto& x : v) x *= inv;
    // back-substitute into existing rows to keep full reduction
    for (std::size_t r = 0; r < m_rows.size(); ++r) {
      const Scalar& c = m_rows[r][piv];
      if (c.is_zero()) continue;
      Scalar f = c;
      for (std::size_t j = 0; j < m_ambient; ++j)
        if (!v[j].is_zero()) m_rows[r][j] -= f * v[j];
    }
    m_rows.push_back(std::move(v));
    m_pivots.push_back(piv);
    return true;
  }

  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

  // canonical subspace in the natural column order
  Subspace to_subspace() const {
    return Subspace::span(m_fld, m_ambient, m_rows);
  }

private:
  Field m_fld;
  std::size_t m_ambient;
  std::vector<std::size_t> m_order;
  std::vector<Vec> m_rows;
  std::vector<std::size_t> m_pivots;
};

// Echelon basis over a coordinate priority order, with rows stored sparsely.
// Fully reduced rows of a high-rank subspace touch only their pivot and the
// few non-pivot columns, which keeps insertion cheap even in large ambient
// spaces.
class SparseEchelon {
public:
  SparseEchelon(const Field& fld, std::size_t ambient, std::vector<std::size_t> priority_order)
      : m_fld(fld), m_ambient(ambient), m_order(std::move(priority_order)),
        m_pivot_row(ambient, SIZE_MAX) {
    if (m_order.size() != ambient) throw std::logic_error("priority order size mismatch");
  }

  std::size_t dim() const { return m_rows.size(); }
  std::size_t ambient() const { return m_ambient; }
  const std::vector<std::size_t>& pivots() const { return m_pivots; }

  Vec row_dense(std::size_t r) const {
    Vec v = zero_vec(m_fld, m_ambient);
    for (const auto& [i, c] : m_rows[r]) v[i] = c;
    return v;
  }

  void reduce_inplace(Vec& v) const {
    for (auto coord : m_order) {
      if (v[coord].is_zero()) continue;
      std::size_t r = m_pivot_row[coord];
      if (r == SIZE_MAX) continue;
      Scalar f = v[coord];
      for (const auto& [i, c] : m_rows[r]) v[i] -= f * c;
    }
  }

  bool contains(Vec v) const {
    reduce_inplace(v);
    return is_zero_vec(v);
  }

  bool insert(Vec v) {
    reduce_inplace(v);
    std::size_t piv = SIZE_MAX;
    for (auto coord : m_order) {
      if (!v[coord].is_zero()) { piv = coord; break; }
    }
    if (piv == SIZE_MAX) return false;
    Scalar inv = v[piv].inverse();
    std::vector<std::pair<std::size_t, Scalar>> row;
    for (std::size_t i = 0; i < m_ambient; ++i)
      if (!v[i].is_zero()) row.emplace_back(i, v[i] * inv);
    // clear the new pivot column from existing rows
    for (std::size_t r = 0; r < m_rows.size(); ++r) {
      Scalar f = entry(m_rows[r], piv);
      if (f.is_zero()) continue;
      subtract_scaled(m_rows[r], f, row);
    }
    m_pivot_row[piv] = m_rows.size();
    m_rows.push_back(std::move(row));
    m_pivots.push_back(piv);
    return true;
  }

  // canonical subspace in the natural coordinate order
  Subspace to_subspace() const {
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < m_rows.size(); ++r) rows.push_back(row_dense(r));
    return Subspace::span(m_fld, m_ambient, rows);
  }

private:
  using Row = std::vector<std::pair<std::size_t, Scalar>>;

  Scalar entry(const Row& row, std::size_t coord) const {
    for (const auto& [i, c] : row)
      if (i == coord) return c;
    return m_fld.zero();
  }

  void subtract_scaled(Row& dst, const Scalar& f, const Row& src) const {
    Row out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
      if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
        out.push_back(dst[i++]);
      } else if (i == dst.size() || src[j].first < dst[i].first) {
        out.emplace_back(src[j].first, -(f * src[j].second));
        ++j;
      } else {
        Scalar s = dst[i].second - f * src[j].second;
        if (!s.is_zero()) out.emplace_back(dst[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    dst = std::move(out);
  }

  Field m_fld;
  std::size_t m_ambient;
  std::vector<std::size_t> m_order;
  std::vector<std::size_t> m_pivot_row; // coord -> row index or SIZE_MAX
  std::vector<Row> m_rows;
  std::vector<std::size_t> m_pivots;
};

// One bilinear closure operator: maps (ambient basis index, subspace vector)
// to an ambient vector.
using ClosureOp = std::function<Vec(std::size_t, const Vec&)>;

// Smallest subspace containing seed and stable under every operator applied
// with every ambient basis vector.  Terminates because the dimension grows
// strictly in each round and is bounded by the ambient dimension.
inline Subspace saturate(const Subspace& seed, const std::vector<ClosureOp>& ops) {
  const Field& fld = seed.field();
  std::size_t n = seed.ambient();
  EchelonBasis basis(fld, n);
  std::vector<Vec> frontier;
  for (std::size_t r = 0; r < seed.dim(); ++r) {
    Vec v = seed.basis_row(r);
    if (basis.insert(v)) frontier.push_back(std::move(v));
  }
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& v : frontier)
      for (const auto& op : ops)
        for (std::size_t b = 0; b < n; ++b) {
          Vec w = op(b, v);
          if (w.size() != n) throw std::logic_error("closure operator dimension mismatch");
          if (basis.insert(w)) next.push_back(std::move(w));
        }
    frontier = std::move(next);
  }
  return basis.to_subspace();
}

} // namespace liexmod
