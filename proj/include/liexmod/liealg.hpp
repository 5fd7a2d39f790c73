#pragma once

// Finite-dimensional Lie algebras presented by a named basis and the full
// structure-constant table, linear maps between them, morphism and Jacobi
// checkers, ideals, quotients and direct sums.

#include "liexmod/linalg.hpp"
#include "liexmod/term.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

class LieAlgebra {
public:
  LieAlgebra(std::string name, const Field& fld, std::vector<Letter> basis,
             std::vector<Vec> table)
      : m_name(std::move(name)), m_fld(fld), m_basis(std::move(basis)),
        m_table(std::move(table)) {
    std::size_t n = m_basis.size();
    if (m_table.size() != n * n)
      throw std::logic_error("bracket table must have dim^2 entries");
    for (const auto& v : m_table)
      if (v.size() != n) throw std::logic_error("bracket table entry has wrong dimension");
  }

  // all brackets zero
  static LieAlgebra abelian(std::string name, const Field& fld, std::vector<Letter> basis) {
    std::size_t n = basis.size();
    return LieAlgebra(std::move(name), fld, std::move(basis),
                      std::vector<Vec>(n * n, zero_vec(fld, n)));
  }

  static LieAlgebra zero(std::string name, const Field& fld) {
    return abelian(std::move(name), fld, {});
  }

  const std::string& name() const { return m_name; }
  const Field& field() const { return m_fld; }
  std::size_t dim() const { return m_basis.size(); }
  const std::vector<Letter>& basis() const { return m_basis; }
  const Letter& letter(std::size_t i) const { return m_basis[i]; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < m_basis.size(); ++i)
      if (m_basis[i].name == name) return i;
    return std::nullopt;
  }

  const Vec& bracket_basis(std::size_t i, std::size_t j) const {
    return m_table[i * dim() + j];
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    Vec out = zero_vec(m_fld, dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (v[j].is_zero()) continue;
        add_scaled(out, u[i] * v[j], bracket_basis(i, j));
      }
    }
    return out;
  }

  // adjoint matrix of the i-th basis element
  Matrix ad(std::size_t i) const {
    Matrix m(m_fld, dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) m.set_col(j, bracket_basis(i, j));
    return m;
  }

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.m_basis == b.m_basis && a.m_table == b.m_table;
  }

private:
  std::string m_name;
  Field m_fld;
  std::vector<Letter> m_basis;
  std::vector<Vec> m_table; // row-major (i,j) -> [e_i, e_j]
};

// Convenience builder: start from an abelian table and set brackets pairwise;
// [e_i,e_j] = v also records [e_j,e_i] = -v.
class LieAlgebraBuilder {
public:
  LieAlgebraBuilder(std::string name, const Field& fld, std::vector<Letter> basis)
      : m_name(std::move(name)), m_fld(fld), m_basis(std::move(basis)),
        m_table(m_basis.size() * m_basis.size(), zero_vec(fld, m_basis.size())) {}

  LieAlgebraBuilder& set(std::size_t i, std::size_t j, Vec v) {
    std::size_t n = m_basis.size();
    m_table[j * n + i] = negated(v);
    m_table[i * n + j] = std::move(v);
    return *this;
  }

  LieAlgebra build() const { return LieAlgebra(m_name, m_fld, m_basis, m_table); }

private:
  std::string m_name;
  Field m_fld;
  std::vector<Letter> m_basis;
  std::vector<Vec> m_table;
};

struct JacobiCheck {
  enum class Family { alternating, antisymmetry, jacobi };
  bool ok = true;
  Family family = Family::jacobi;
  std::size_t i = 0, j = 0, k = 0;
  Vec defect;

  std::string family_name() const {
    switch (family) {
      case Family::alternating: return "alternating";
      case Family::antisymmetry: return "antisymmetry";
      default: return "jacobi";
    }
  }
};

// Witness order is deterministic: alternating, then antisymmetry on pairs
// i<j, then the Jacobi identity on triples i<j<k, all lexicographic.
inline JacobiCheck check_jacobi(const LieAlgebra& a) {
  std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero_vec(a.bracket_basis(i, i)))
      return {false, JacobiCheck::Family::alternating, i, i, i, a.bracket_basis(i, i)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec d = add(a.bracket_basis(i, j), a.bracket_basis(j, i));
      if (!is_zero_vec(d)) return {false, JacobiCheck::Family::antisymmetry, i, j, j, d};
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec d = a.bracket(a.bracket_basis(i, j), unit_vec(a.field(), n, k));
        d = add(std::move(d), a.bracket(a.bracket_basis(j, k), unit_vec(a.field(), n, i)));
        d = add(std::move(d), a.bracket(a.bracket_basis(k, i), unit_vec(a.field(), n, j)));
        if (!is_zero_vec(d)) return {false, JacobiCheck::Family::jacobi, i, j, k, d};
      }
  return {};
}

struct LinearMap {
  LieAlgebra domain, codomain;
  Matrix mat; // codomain-dim x domain-dim

  LinearMap(LieAlgebra dom, LieAlgebra cod, Matrix m)
      : domain(std::move(dom)), codomain(std::move(cod)), mat(std::move(m)) {
    if (mat.rows() != codomain.dim() || mat.cols() != domain.dim())
      throw std::logic_error("linear map dimensions do not match its algebras");
  }

  static LinearMap identity(const LieAlgebra& a) {
    return LinearMap(a, a, Matrix::identity(a.field(), a.dim()));
  }
  static LinearMap zero(const LieAlgebra& dom, const LieAlgebra& cod) {
    return LinearMap(dom, cod, Matrix(dom.field(), cod.dim(), dom.dim()));
  }

  Vec apply(const Vec& v) const { return mat.apply(v); }
  Vec apply_basis(std::size_t i) const { return mat.col(i); }

  friend LinearMap compose(const LinearMap& g, const LinearMap& f) {
    return LinearMap(f.domain, g.codomain, g.mat * f.mat);
  }
};

struct MorphismCheck {
  bool ok = true;
  std::size_t i = 0, j = 0;
  Vec defect;
};

inline MorphismCheck check_morphism(const LinearMap& f) {
  std::size_t n = f.domain.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec lhs = f.apply(f.domain.bracket_basis(i, j));
      Vec rhs = f.codomain.bracket(f.apply_basis(i), f.apply_basis(j));
      Vec d = sub(std::move(lhs), rhs);
      if (!is_zero_vec(d)) return {false, i, j, d};
    }
  return {};
}

class NotAnIdealError : public std::runtime_error {
public:
  NotAnIdealError(std::size_t basis_index, std::size_t row_index)
      : std::runtime_error("subspace is not an ideal: bracket of basis element " +
                           std::to_string(basis_index) + " with subspace row " +
                           std::to_string(row_index) + " escapes"),
        basis_index(basis_index), row_index(row_index) {}
  std::size_t basis_index, row_index;
};

struct QuotientResult {
  LieAlgebra algebra;
  LinearMap projection;
};

// Quotient by an ideal W; the quotient basis consists of the classes of the
// non-pivot coordinates of W, keeping their letters.
inline QuotientResult quotient_by_ideal(const LieAlgebra& a, const Subspace& w) {
  if (w.ambient() != a.dim()) throw std::logic_error("ideal has wrong ambient dimension");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t r = 0; r < w.dim(); ++r)
      if (!w.contains(a.bracket(unit_vec(a.field(), a.dim(), i), w.basis_row(r))))
        throw NotAnIdealError(i, r);

  std::vector<bool> is_pivot(a.dim(), false);
  for (auto p : w.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.dim(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  auto quot_coords = [&](const Vec& v) {
    Vec red = w.reduce(v);
    Vec out;
    out.reserve(free_cols.size());
    for (auto c : free_cols) out.push_back(red[c]);
    return out;
  };

  std::size_t q = free_cols.size();
  std::vector<Letter> basis;
  for (auto c : free_cols) basis.push_back(a.letter(c));
  std::vector<Vec> table(q * q, zero_vec(a.field(), q));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      table[i * q + j] = quot_coords(a.bracket_basis(free_cols[i], free_cols[j]));
  LieAlgebra quotient(a.name() + "/W", a.field(), std::move(basis), std::move(table));
  if (auto c = check_jacobi(quotient); !c.ok)
    throw std::logic_error("quotient table fails " + c.family_name() + " (internal error)");

  Matrix proj(a.field(), q, a.dim());
  for (std::size_t c = 0; c < a.dim(); ++c)
    proj.set_col(c, quot_coords(unit_vec(a.field(), a.dim(), c)));
  return QuotientResult{quotient, LinearMap(a, quotient, std::move(proj))};
}

// Renames colliding basis letters of the second summand with a prime.
inline LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  std::size_t n = a.dim(), m = b.dim();
  std::vector<Letter> basis = a.basis();
  for (const auto& l : b.basis()) {
    Letter nl = l;
    auto taken = [&](const std::string& s) {
      for (const auto& x : basis)
        if (x.name == s) return true;
      return false;
    };
    while (taken(nl.name)) nl.name += "'";
    basis.push_back(nl);
  }
  std::size_t t = n + m;
  std::vector<Vec> table(t * t, zero_vec(a.field(), t));
  auto embed_a = [&](const Vec& v) {
    Vec out = zero_vec(a.field(), t);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i];
    return out;
  };
  auto embed_b = [&](const Vec& v) {
    Vec out = zero_vec(a.field(), t);
    for (std::size_t i = 0; i < m; ++i) out[n + i] = v[i];
    return out;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * t + j] = embed_a(a.bracket_basis(i, j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      table[(n + i) * t + (n + j)] = embed_b(b.bracket_basis(i, j));
  return LieAlgebra(a.name() + "+" + b.name(), a.field(), std::move(basis), std::move(table));
}

inline std::string vec_str(const LieAlgebra& a, const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (v[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += v[i].is_one() ? a.letter(i).name : v[i].str() + "*" + a.letter(i).name;
  }
  return out.empty() ? "0" : out;
}

} // namespace liexmod
