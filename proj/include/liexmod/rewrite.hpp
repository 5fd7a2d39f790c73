#pragma once

// Rewriting of bracket words into linear combinations of right-nested words
// [x_k,[...,[x_2,x_1]...]], using only the Jacobi identity and the
// alternating property.  normalize() expands left factors,
// normalize_pinned() additionally forces a chosen letter into the x_1 slot.
// Output is deterministic: subwords are always processed leftmost-innermost.

#include "liexmod/term.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

class RewriteError : public std::runtime_error {
public:
  explicit RewriteError(const std::string& msg) : std::runtime_error(msg) {}
};

using NormalForm = std::vector<std::pair<Scalar, RightNestedWord>>;

namespace detail {

inline void combine(NormalForm& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  NormalForm out;
  for (auto& [c, w] : terms) {
    if (!out.empty() && out.back().second == w)
      out.back().first += c;
    else
      out.emplace_back(std::move(c), std::move(w));
    if (!out.empty() && out.back().first.is_zero()) out.pop_back();
  }
  terms = std::move(out);
}

// [A,B] with A = [A1,A2] becomes [A1,[A2,B]] - [A2,[A1,B]]
inline void right_nest(const Scalar& c, const MagmaTerm& t, NormalForm& out) {
  if (t.is_leaf()) {
    out.emplace_back(c, RightNestedWord{{t.letter()}});
    return;
  }
  if (t.left() == t.right()) return; // [u,u] = 0
  if (t.left().is_leaf()) {
    NormalForm inner;
    right_nest(c, t.right(), inner);
    for (auto& [ci, w] : inner) {
      w.letters.insert(w.letters.begin(), t.left().letter());
      out.emplace_back(std::move(ci), std::move(w));
    }
    return;
  }
  const MagmaTerm& a1 = t.left().left();
  const MagmaTerm& a2 = t.left().right();
  const MagmaTerm& b = t.right();
  right_nest(c, MagmaTerm::bracket(a1, MagmaTerm::bracket(a2, b)), out);
  right_nest(-c, MagmaTerm::bracket(a2, MagmaTerm::bracket(a1, b)), out);
}

// Phase 1 of the pinned rewrite: Jacobi pushes until the pinned letter's
// sibling is a single letter.  The tracked occurrence is the leftmost one.
inline void pin_to_simple(const Scalar& c, const MagmaTerm& t, const Letter& pin,
                          std::vector<std::pair<Scalar, MagmaTerm>>& out) {
  if (t.is_leaf()) { // bare pin
    out.emplace_back(c, t);
    return;
  }
  if (t.left() == t.right()) return;
  const MagmaTerm& a = t.left();
  const MagmaTerm& b = t.right();
  if (a.count(pin) > 0) {
    if (a.is_leaf()) {
      if (b.is_leaf()) {
        out.emplace_back(c, t);
        return;
      }
      // [pin,[B1,B2]] = [[pin,B1],B2] + [B1,[pin,B2]]
      pin_to_simple(c, MagmaTerm::bracket(MagmaTerm::bracket(a, b.left()), b.right()), pin, out);
      pin_to_simple(c, MagmaTerm::bracket(b.left(), MagmaTerm::bracket(a, b.right())), pin, out);
      return;
    }
    std::vector<std::pair<Scalar, MagmaTerm>> inner;
    pin_to_simple(c, a, pin, inner);
    for (auto& [ci, ai] : inner)
      out.emplace_back(std::move(ci), MagmaTerm::bracket(std::move(ai), b));
    return;
  }
  if (b.count(pin) == 0) throw RewriteError("pinned letter lost during rewrite");
  if (b.is_leaf()) {
    if (a.is_leaf()) {
      out.emplace_back(c, t);
      return;
    }
    // [[A1,A2],pin] = [A1,[A2,pin]] - [A2,[A1,pin]]
    pin_to_simple(c, MagmaTerm::bracket(a.left(), MagmaTerm::bracket(a.right(), b)), pin, out);
    pin_to_simple(-c, MagmaTerm::bracket(a.right(), MagmaTerm::bracket(a.left(), b)), pin, out);
    return;
  }
  std::vector<std::pair<Scalar, MagmaTerm>> inner;
  pin_to_simple(c, b, pin, inner);
  for (auto& [ci, bi] : inner)
    out.emplace_back(std::move(ci), MagmaTerm::bracket(a, std::move(bi)));
}

inline bool is_core(const MagmaTerm& t, const Letter& pin) {
  return !t.is_leaf() && t.left().is_leaf() && t.right().is_leaf() &&
         t.right().letter() == pin;
}

// Flip the simple bracket holding the pin into the [y,pin] orientation.
// The pin occurs exactly once, so the descent is unambiguous.
inline std::pair<Scalar, MagmaTerm> orient_core(const Scalar& c, const MagmaTerm& t,
                                                const Letter& pin) {
  if (t.is_leaf()) return {c, t}; // bare pin
  if (t.left().is_leaf() && t.right().is_leaf()) {
    if (t.right().letter() == pin) return {c, t};
    return {-c, MagmaTerm::bracket(t.right(), t.left())};
  }
  bool in_left = t.left().count(pin) > 0;
  auto [cs, fixed] = orient_core(c, in_left ? t.left() : t.right(), pin);
  return {cs, in_left ? MagmaTerm::bracket(std::move(fixed), t.right())
                      : MagmaTerm::bracket(t.left(), std::move(fixed))};
}

// Phase 2: grow the well-nested subword around the core [y,pin]; when its
// sibling is a bracket, break it with the Jacobi identity.
inline void grow_well_nested(const Scalar& c, const MagmaTerm& t, const Letter& pin,
                             std::vector<std::pair<Scalar, MagmaTerm>>& out) {
  if (t.is_leaf() || is_core(t, pin)) {
    out.emplace_back(c, t);
    return;
  }
  const MagmaTerm& a = t.left();
  const MagmaTerm& b = t.right();
  bool in_left = a.count(pin) > 0;
  std::vector<std::pair<Scalar, MagmaTerm>> inner;
  grow_well_nested(c, in_left ? a : b, pin, inner);
  for (auto& [ci, wi] : inner) {
    if (in_left) {
      if (b.is_leaf()) {
        out.emplace_back(std::move(ci), MagmaTerm::bracket(std::move(wi), b));
      } else {
        // [t,[w1,w2]] = [[t,w1],w2] + [w1,[t,w2]]
        grow_well_nested(ci, MagmaTerm::bracket(MagmaTerm::bracket(wi, b.left()), b.right()),
                         pin, out);
        grow_well_nested(ci, MagmaTerm::bracket(b.left(), MagmaTerm::bracket(wi, b.right())),
                         pin, out);
      }
    } else {
      if (a.is_leaf()) {
        out.emplace_back(std::move(ci), MagmaTerm::bracket(a, std::move(wi)));
      } else {
        // [[w1,w2],t] = -[[t,w1],w2] - [w1,[t,w2]]
        grow_well_nested(-ci, MagmaTerm::bracket(MagmaTerm::bracket(wi, a.left()), a.right()),
                         pin, out);
        grow_well_nested(-ci, MagmaTerm::bracket(a.left(), MagmaTerm::bracket(wi, a.right())),
                         pin, out);
      }
    }
  }
}

// Phase 3: flip brackets so the single letter sits on the left; collect the
// word.  The input is well-nested around the core, so every level has a
// letter sibling.
inline void flip_to_word(const Scalar& c, const MagmaTerm& t, const Letter& pin,
                         NormalForm& out) {
  Scalar sign = c;
  RightNestedWord w;
  const MagmaTerm* cur = &t;
  while (!cur->is_leaf() && !is_core(*cur, pin)) {
    if (cur->right().count(pin) > 0) {
      if (!cur->left().is_leaf()) throw RewriteError("term is not well nested");
      w.letters.push_back(cur->left().letter());
      cur = &cur->right();
    } else {
      if (!cur->right().is_leaf()) throw RewriteError("term is not well nested");
      sign = -sign;
      w.letters.push_back(cur->right().letter());
      cur = &cur->left();
    }
  }
  if (cur->is_leaf()) {
    w.letters.push_back(cur->letter()); // bare pin
  } else {
    w.letters.push_back(cur->left().letter());
    w.letters.push_back(cur->right().letter());
  }
  out.emplace_back(std::move(sign), std::move(w));
}

} // namespace detail

// Rewrites each term of e as a combination of right-nested words of the same
// value in the free Lie algebra.
inline NormalForm normalize(const LieExpr& e) {
  NormalForm out;
  for (const auto& [c, t] : e.terms()) detail::right_nest(c, t, out);
  detail::combine(out);
  return out;
}

// As normalize, but every output word ends in the pinned letter.  Terms not
// containing the pin are rejected.
inline NormalForm normalize_pinned(const LieExpr& e, const Letter& pin) {
  NormalForm out;
  for (const auto& [c, t] : e.terms()) {
    std::size_t occurrences = t.count(pin);
    if (occurrences == 0)
      throw RewriteError("term " + t.str() + " does not contain the pinned letter " + pin.name);
    if (occurrences > 1)
      throw RewriteError("pinned letter " + pin.name + " occurs " +
                         std::to_string(occurrences) + " times in " + t.str());
    std::vector<std::pair<Scalar, MagmaTerm>> simple;
    detail::pin_to_simple(c, t, pin, simple);
    for (auto& [ci, ti] : simple) {
      auto [cs, ts] = detail::orient_core(ci, ti, pin);
      std::vector<std::pair<Scalar, MagmaTerm>> wn;
      detail::grow_well_nested(cs, ts, pin, wn);
      for (auto& [cw, tw] : wn) detail::flip_to_word(cw, tw, pin, out);
    }
  }
  detail::combine(out);
  return out;
}

inline LieExpr to_expr(const NormalForm& nf) {
  std::vector<std::pair<Scalar, MagmaTerm>> terms;
  for (const auto& [c, w] : nf) terms.emplace_back(c, w.to_term());
  return LieExpr::sum(std::move(terms));
}

} // namespace liexmod
