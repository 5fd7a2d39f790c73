#pragma once

// Formal bracket words: letters, magma terms (binary bracket trees),
// linear combinations of terms, and right-nested words
// [x_k,[x_{k-1},[...,[x_2,x_1]...]]].  Includes the text syntax used by
// the CLI: letters are identifiers, brackets are [s,t], combinations are
// written like "3/2*[a,[b,c]] - [c,a]".

#include "liexmod/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

struct Letter {
  std::string name;
  std::string origin; // generating set tag ("M", "N", "P", ...)

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter& a, const Letter& b) {
    if (auto c = a.origin <=> b.origin; c != 0) return c;
    return a.name <=> b.name;
  }
};

class MagmaTerm {
public:
  static MagmaTerm leaf(Letter l) {
    return MagmaTerm(std::make_shared<const Node>(Node{std::move(l), {}, {}}));
  }
  static MagmaTerm bracket(MagmaTerm a, MagmaTerm b) {
    return MagmaTerm(std::make_shared<const Node>(
        Node{{}, std::make_shared<const MagmaTerm>(std::move(a)),
             std::make_shared<const MagmaTerm>(std::move(b))}));
  }

  bool is_leaf() const { return m_node->left == nullptr; }
  const Letter& letter() const {
    if (!is_leaf()) throw std::logic_error("letter() on a bracket term");
    return m_node->leaf;
  }
  const MagmaTerm& left() const { return *m_node->left; }
  const MagmaTerm& right() const { return *m_node->right; }

  // number of letters
  std::size_t degree() const {
    return is_leaf() ? 1 : left().degree() + right().degree();
  }

  std::size_t count(const Letter& l) const {
    if (is_leaf()) return letter() == l ? 1 : 0;
    return left().count(l) + right().count(l);
  }

  friend bool operator==(const MagmaTerm& a, const MagmaTerm& b) {
    if (a.m_node == b.m_node) return true;
    if (a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf()) return a.letter() == b.letter();
    return a.left() == b.left() && a.right() == b.right();
  }

  // total order: higher degree first, then leaves before brackets, then
  // structurally
  static int compare(const MagmaTerm& a, const MagmaTerm& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree() ? -1 : 1;
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
    if (a.is_leaf()) {
      if (a.letter() == b.letter()) return 0;
      return a.letter() < b.letter() ? -1 : 1;
    }
    if (int c = compare(a.left(), b.left()); c != 0) return c;
    return compare(a.right(), b.right());
  }
  friend bool operator<(const MagmaTerm& a, const MagmaTerm& b) { return compare(a, b) < 0; }

  std::string str() const {
    if (is_leaf()) return letter().name;
    return "[" + left().str() + "," + right().str() + "]";
  }

private:
  struct Node {
    Letter leaf;
    std::shared_ptr<const MagmaTerm> left, right;
  };
  explicit MagmaTerm(std::shared_ptr<const Node> n) : m_node(std::move(n)) {}
  std::shared_ptr<const Node> m_node;
};

// Finite formal sum of (coefficient, term); no zero coefficients stored,
// terms kept in a fixed total order.
class LieExpr {
public:
  LieExpr() = default;
  LieExpr(Scalar c, MagmaTerm t) {
    if (!c.is_zero()) m_terms.emplace_back(std::move(c), std::move(t));
  }

  static LieExpr sum(std::vector<std::pair<Scalar, MagmaTerm>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    LieExpr e;
    for (auto& [c, t] : terms) {
      if (!e.m_terms.empty() && e.m_terms.back().second == t)
        e.m_terms.back().first += c;
      else
        e.m_terms.emplace_back(std::move(c), std::move(t));
      if (!e.m_terms.empty() && e.m_terms.back().first.is_zero()) e.m_terms.pop_back();
    }
    return e;
  }

  bool is_zero() const { return m_terms.empty(); }
  const std::vector<std::pair<Scalar, MagmaTerm>>& terms() const { return m_terms; }

  friend LieExpr operator+(const LieExpr& a, const LieExpr& b) {
    auto terms = a.m_terms;
    terms.insert(terms.end(), b.m_terms.begin(), b.m_terms.end());
    return sum(std::move(terms));
  }
  friend LieExpr operator-(const LieExpr& a, const LieExpr& b) {
    auto terms = a.m_terms;
    for (const auto& [c, t] : b.m_terms) terms.emplace_back(-c, t);
    return sum(std::move(terms));
  }
  friend LieExpr operator*(const Scalar& c, const LieExpr& e) {
    std::vector<std::pair<Scalar, MagmaTerm>> terms;
    for (const auto& [x, t] : e.m_terms) terms.emplace_back(c * x, t);
    return sum(std::move(terms));
  }

  // formal bilinear bracket
  friend LieExpr bracket(const LieExpr& a, const LieExpr& b) {
    std::vector<std::pair<Scalar, MagmaTerm>> terms;
    for (const auto& [ca, ta] : a.m_terms)
      for (const auto& [cb, tb] : b.m_terms)
        terms.emplace_back(ca * cb, MagmaTerm::bracket(ta, tb));
    return sum(std::move(terms));
  }

  std::string str() const {
    if (m_terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < m_terms.size(); ++i) {
      const auto& [c, t] = m_terms[i];
      Scalar a = c;
      if (i == 0) {
        if (a == -leading_one(a)) { out += "-"; a = -a; }
      } else {
        bool neg = is_negative_for_print(a);
        out += neg ? " - " : " + ";
        if (neg) a = -a;
      }
      if (!a.is_one()) out += a.str() + "*";
      out += t.str();
    }
    return out;
  }

private:
  static Scalar leading_one(const Scalar& sample) {
    return sample.is_rational() ? Scalar(1L) : Scalar(1, sample.fp().p);
  }
  static bool is_negative_for_print(const Scalar& s) {
    return s.is_rational() && s.rational() < 0;
  }

  std::vector<std::pair<Scalar, MagmaTerm>> m_terms;
};

// [x_k,[x_{k-1},[...,[x_2,x_1]...]]], letters stored outermost first;
// a single letter counts as the k = 1 case.
struct RightNestedWord {
  std::vector<Letter> letters;

  std::size_t degree() const { return letters.size(); }
  const Letter& innermost() const { return letters.back(); }

  MagmaTerm to_term() const {
    if (letters.empty()) throw std::logic_error("empty right-nested word");
    MagmaTerm t = MagmaTerm::leaf(letters.back());
    for (std::size_t i = letters.size() - 1; i-- > 0;)
      t = MagmaTerm::bracket(MagmaTerm::leaf(letters[i]), t);
    return t;
  }

  friend bool operator==(const RightNestedWord&, const RightNestedWord&) = default;
  friend bool operator<(const RightNestedWord& a, const RightNestedWord& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
};

// no bracket ever appears as the left child: [x,[y,[...]]]
inline bool is_right_nested(const MagmaTerm& t) {
  if (t.is_leaf()) return true;
  return t.left().is_leaf() && is_right_nested(t.right());
}

inline RightNestedWord to_right_nested(const MagmaTerm& t) {
  RightNestedWord w;
  const MagmaTerm* cur = &t;
  while (!cur->is_leaf()) {
    if (!cur->left().is_leaf()) throw std::logic_error("term is not right-nested");
    w.letters.push_back(cur->left().letter());
    cur = &cur->right();
  }
  w.letters.push_back(cur->letter());
  return w;
}

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Recursive-descent parser for the term syntax.  Letters found in the
// input get the supplied origin tag.
class TermParser {
public:
  TermParser(std::string text, const Field& fld, std::string origin = "X")
      : m_text(std::move(text)), m_fld(fld), m_origin(std::move(origin)) {}

  LieExpr parse_expr() {
    skip_ws();
    std::vector<std::pair<Scalar, MagmaTerm>> terms;
    bool first = true;
    while (true) {
      skip_ws();
      Scalar sign = m_fld.one();
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -sign;
        ++m_pos;
      } else if (!first) {
        break;
      }
      skip_ws();
      if (m_pos >= m_text.size()) throw ParseError("expected a term", m_pos);
      auto [c, t] = parse_term();
      terms.emplace_back(sign * c, std::move(t));
      first = false;
      skip_ws();
      if (m_pos >= m_text.size()) break;
      if (peek() != '+' && peek() != '-')
        throw ParseError("expected '+' or '-'", m_pos);
    }
    return LieExpr::sum(std::move(terms));
  }

  MagmaTerm parse_single_term() {
    skip_ws();
    MagmaTerm t = parse_magma();
    skip_ws();
    if (m_pos != m_text.size()) throw ParseError("trailing input", m_pos);
    return t;
  }

private:
  char peek() const { return m_pos < m_text.size() ? m_text[m_pos] : '\0'; }
  void skip_ws() {
    while (m_pos < m_text.size() && (m_text[m_pos] == ' ' || m_text[m_pos] == '\t')) ++m_pos;
  }

  std::pair<Scalar, MagmaTerm> parse_term() {
    Scalar c = m_fld.one();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = parse_scalar();
      skip_ws();
      if (peek() == '*') { ++m_pos; skip_ws(); }
      else if (peek() != '[' && !is_ident_start(peek())) {
        // "0" on its own denotes the zero combination
        if (c.is_zero()) return {c, MagmaTerm::leaf(Letter{"0", m_origin})};
        throw ParseError("expected '*' or a term after coefficient", m_pos);
      }
    }
    return {std::move(c), parse_magma()};
  }

  Scalar parse_scalar() {
    std::size_t start = m_pos;
    while (m_pos < m_text.size() &&
           (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '/'))
      ++m_pos;
    try {
      return m_fld.parse(m_text.substr(start, m_pos - start));
    } catch (const ScalarError& e) {
      throw ParseError(e.what(), start);
    }
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  MagmaTerm parse_magma() {
    skip_ws();
    if (peek() == '[') {
      std::size_t open = m_pos;
      ++m_pos;
      MagmaTerm a = parse_magma();
      skip_ws();
      if (peek() != ',') throw ParseError("expected ',' in bracket", m_pos);
      ++m_pos;
      MagmaTerm b = parse_magma();
      skip_ws();
      if (peek() != ']') throw ParseError("unclosed bracket opened", open);
      ++m_pos;
      return MagmaTerm::bracket(std::move(a), std::move(b));
    }
    if (!is_ident_start(peek())) throw ParseError("expected a letter or '['", m_pos);
    std::size_t start = m_pos;
    while (m_pos < m_text.size() && is_ident_char(m_text[m_pos])) ++m_pos;
    return MagmaTerm::leaf(Letter{m_text.substr(start, m_pos - start), m_origin});
  }

  std::string m_text;
  std::size_t m_pos = 0;
  Field m_fld;
  std::string m_origin;
};

} // namespace liexmod
