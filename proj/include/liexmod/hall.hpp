#pragma once

// The free Lie algebra on a finite alphabet, truncated at a nilpotency
// class c: Hall-word basis graded by degree, structure constants computed
// by the classical collection recursion, and multilinear expansion of
// bracket expressions into Hall coordinates.  The bracket table is checked
// against antisymmetry and the Jacobi identity when the algebra is built.

#include "liexmod/liealg.hpp"
#include "liexmod/linalg.hpp"
#include "liexmod/term.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

// sparse coordinate vector, sorted by index
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

namespace detail {

inline void sp_add(SparseVec& acc, const Scalar& c, const SparseVec& v) {
  if (c.is_zero()) return;
  SparseVec out;
  out.reserve(acc.size() + v.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() || j < v.size()) {
    if (j == v.size() || (i < acc.size() && acc[i].first < v[j].first)) {
      out.push_back(acc[i++]);
    } else if (i == acc.size() || v[j].first < acc[i].first) {
      out.emplace_back(v[j].first, c * v[j].second);
      ++j;
    } else {
      Scalar s = acc[i].second + c * v[j].second;
      if (!s.is_zero()) out.emplace_back(acc[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  acc = std::move(out);
}

} // namespace detail

struct HallWord {
  std::size_t degree;
  long left = -1, right = -1; // basis indices; -1 for generators
  std::size_t letter = 0;     // generator index when degree == 1
  std::string name;
};

class HallAlgebra {
public:
  HallAlgebra(const Field& fld, std::vector<Letter> generators, std::size_t cls)
      : m_fld(fld), m_gens(std::move(generators)), m_cls(cls) {
    if (cls < 1) throw std::invalid_argument("nilpotency class must be at least 1");
    if (m_gens.empty()) throw std::invalid_argument("generator list must not be empty");
    for (std::size_t i = 0; i < m_gens.size(); ++i)
      for (std::size_t j = i + 1; j < m_gens.size(); ++j)
        if (m_gens[i] == m_gens[j])
          throw std::invalid_argument("duplicate generator " + m_gens[i].name);
    build_basis();
    verify_table();
  }

  const Field& field() const { return m_fld; }
  std::size_t cls() const { return m_cls; }
  std::size_t dim() const { return m_basis.size(); }
  const std::vector<Letter>& generators() const { return m_gens; }
  const HallWord& word(std::size_t i) const { return m_basis[i]; }
  std::size_t degree_of(std::size_t i) const { return m_basis[i].degree; }

  std::vector<std::size_t> dims_by_degree() const {
    std::vector<std::size_t> out(m_cls + 1, 0);
    for (const auto& w : m_basis) ++out[w.degree];
    return out;
  }

  std::size_t letter_index(const Letter& l) const {
    auto it = m_letter_index.find(l);
    if (it == m_letter_index.end())
      throw std::invalid_argument("letter " + l.name + " is not a generator");
    return it->second;
  }

  // bracket of basis elements in Hall coordinates; components of degree
  // beyond the class are truncated to zero
  SparseVec bracket_basis(std::size_t i, std::size_t j) const {
    if (i == j || degree_of(i) + degree_of(j) > m_cls) return {};
    if (i < j) {
      SparseVec v = pair_bracket(j, i);
      for (auto& [k, c] : v) c = -c;
      return v;
    }
    return pair_bracket(i, j);
  }

  // largest degree carrying a nonzero coordinate; 0 for the zero vector
  std::size_t top_degree(const Vec& v) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero() && degree_of(i) > d) d = degree_of(i);
    return d;
  }

  // ad of a single generator letter applied to a coordinate vector
  Vec ad_letter(std::size_t gen_index, const Vec& v) const {
    Vec out = zero_vec(m_fld, dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      if (v[j].is_zero()) continue;
      for (const auto& [k, c] : bracket_basis(gen_index, j)) out[k] += v[j] * c;
    }
    return out;
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    Vec out = zero_vec(m_fld, dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (v[j].is_zero()) continue;
        for (const auto& [k, c] : bracket_basis(i, j)) out[k] += u[i] * v[j] * c;
      }
    }
    return out;
  }

  Vec expand(const MagmaTerm& t) const {
    if (t.degree() > m_cls)
      throw std::invalid_argument("term of degree " + std::to_string(t.degree()) +
                                  " exceeds the truncation class " + std::to_string(m_cls));
    return expand_unchecked(t);
  }

  Vec expand(const LieExpr& e) const {
    Vec out = zero_vec(m_fld, dim());
    for (const auto& [c, t] : e.terms()) add_scaled(out, c, expand(t));
    return out;
  }

  // dense structure-constant form; intended for small truncations
  LieAlgebra to_lie_algebra() const {
    std::size_t n = dim();
    std::vector<Letter> basis;
    for (std::size_t i = 0; i < n; ++i)
      basis.push_back(Letter{m_basis[i].name, "hall"});
    std::vector<Vec> table(n * n, zero_vec(m_fld, n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vec v = zero_vec(m_fld, n);
        for (const auto& [k, c] : bracket_basis(i, j)) v[k] = c;
        table[i * n + j] = std::move(v);
      }
    return LieAlgebra("free(c=" + std::to_string(m_cls) + ")", m_fld, std::move(basis),
                      std::move(table));
  }

private:
  void build_basis() {
    for (std::size_t g = 0; g < m_gens.size(); ++g) {
      m_basis.push_back(HallWord{1, -1, -1, g, m_gens[g].name});
      m_letter_index[m_gens[g]] = g;
    }
    std::vector<std::size_t> deg_end{0, m_basis.size()}; // end index per degree
    for (std::size_t d = 2; d <= m_cls; ++d) {
      std::size_t before = m_basis.size();
      for (std::size_t j = 0; j < before; ++j) {
        std::size_t dj = m_basis[j].degree;
        if (dj >= d) break;
        std::size_t di = d - dj;
        std::size_t lo = deg_end[di - 1], hi = deg_end[di];
        for (std::size_t i = lo; i < hi; ++i) {
          if (i <= j) continue;
          if (m_basis[i].left >= 0 && static_cast<std::size_t>(m_basis[i].right) > j) continue;
          m_pair_index[{i, j}] = m_basis.size();
          m_basis.push_back(HallWord{d, static_cast<long>(i), static_cast<long>(j), 0,
                                     "[" + m_basis[i].name + "," + m_basis[j].name + "]"});
        }
      }
      deg_end.push_back(m_basis.size());
    }
    m_deg_end = std::move(deg_end);
  }

  // [e_i, e_j] for i > j via the collection recursion:
  // if [i,j] is a Hall pair it is a basis element, otherwise i = [x,y] with
  // y > j and [[x,y],j] = [x,[y,j]] + [[x,j],y].
  const SparseVec& pair_bracket(std::size_t i, std::size_t j) const {
    auto key = std::make_pair(i, j);
    auto it = m_bracket_memo.find(key);
    if (it != m_bracket_memo.end()) return it->second;

    SparseVec result;
    auto pit = m_pair_index.find({i, j});
    if (pit != m_pair_index.end()) {
      result.emplace_back(pit->second, m_fld.one());
    } else {
      std::size_t x = static_cast<std::size_t>(m_basis[i].left);
      std::size_t y = static_cast<std::size_t>(m_basis[i].right);
      for (const auto& [k, c] : bracket_basis(y, j))
        detail::sp_add(result, c, bracket_basis(x, k));
      for (const auto& [k, c] : bracket_basis(x, j))
        detail::sp_add(result, c, bracket_basis(k, y));
    }
    return m_bracket_memo.emplace(std::move(key), std::move(result)).first->second;
  }

  Vec expand_unchecked(const MagmaTerm& t) const {
    std::size_t n = dim();
    if (t.is_leaf()) return unit_vec(m_fld, n, letter_index(t.letter()));
    Vec l = expand_unchecked(t.left());
    Vec r = expand_unchecked(t.right());
    return bracket(l, r);
  }

  // antisymmetry holds by construction; the Jacobi identity is checked on
  // every basis triple whose degrees fit inside the class
  void verify_table() const {
    std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      if (3 * degree_of(i) > m_cls) break;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (degree_of(i) + 2 * degree_of(j) > m_cls) break;
        for (std::size_t k = j + 1; k < n; ++k) {
          if (degree_of(i) + degree_of(j) + degree_of(k) > m_cls) break;
          SparseVec acc;
          for (const auto& [a, c] : bracket_basis(i, j))
            detail::sp_add(acc, c, bracket_basis(a, k));
          for (const auto& [a, c] : bracket_basis(j, k))
            detail::sp_add(acc, c, bracket_basis(a, i));
          for (const auto& [a, c] : bracket_basis(k, i))
            detail::sp_add(acc, c, bracket_basis(a, j));
          if (!acc.empty())
            throw std::logic_error("Hall table fails the Jacobi identity at triple (" +
                                   m_basis[i].name + "," + m_basis[j].name + "," +
                                   m_basis[k].name + ")");
        }
      }
    }
  }

  Field m_fld;
  std::vector<Letter> m_gens;
  std::size_t m_cls;
  std::vector<HallWord> m_basis;
  std::vector<std::size_t> m_deg_end;
  std::map<Letter, std::size_t> m_letter_index;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> m_pair_index;
  mutable std::map<std::pair<std::size_t, std::size_t>, SparseVec> m_bracket_memo;
};

inline HallAlgebra hall_algebra(const Field& fld, std::vector<Letter> generators,
                                std::size_t cls) {
  return HallAlgebra(fld, std::move(generators), cls);
}

} // namespace liexmod
