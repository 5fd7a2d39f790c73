#pragma once

// Actions of one Lie algebra on another, stored extensionally as one matrix
// per actor basis element.  Provides the two action axioms, conjugation,
// the compatibility checker, and evaluation of mixed bracket words by
// decomposability (innermost brackets first).

#include "liexmod/liealg.hpp"
#include "liexmod/rewrite.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

class ActionError : public std::runtime_error {
public:
  explicit ActionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Action {
  LieAlgebra actor;  // P
  LieAlgebra target; // M
  std::vector<Matrix> rho; // one target.dim x target.dim matrix per actor basis element

  Action(LieAlgebra p, LieAlgebra m, std::vector<Matrix> mats)
      : actor(std::move(p)), target(std::move(m)), rho(std::move(mats)) {
    if (rho.size() != actor.dim())
      throw std::logic_error("action needs one matrix per actor basis element");
    for (const auto& r : rho)
      if (r.rows() != target.dim() || r.cols() != target.dim())
        throw std::logic_error("action matrix has wrong dimensions");
  }

  // p.m for arbitrary coordinate vectors
  Vec act(const Vec& p, const Vec& m) const {
    Vec out = zero_vec(target.field(), target.dim());
    for (std::size_t i = 0; i < actor.dim(); ++i) {
      if (p[i].is_zero()) continue;
      add_scaled(out, p[i], rho[i].apply(m));
    }
    return out;
  }

  Vec act_basis(std::size_t p, std::size_t m) const { return rho[p].col(m); }

  Matrix rho_of(const Vec& p) const {
    Matrix out(target.field(), target.dim(), target.dim());
    for (std::size_t i = 0; i < actor.dim(); ++i) {
      if (p[i].is_zero()) continue;
      for (std::size_t r = 0; r < target.dim(); ++r)
        for (std::size_t c = 0; c < target.dim(); ++c)
          out.at(r, c) += p[i] * rho[i].at(r, c);
    }
    return out;
  }

  friend bool operator==(const Action& a, const Action& b) {
    return a.actor == b.actor && a.target == b.target && a.rho == b.rho;
  }
};

inline Action zero_action(const LieAlgebra& p, const LieAlgebra& m) {
  return Action(p, m, std::vector<Matrix>(p.dim(), Matrix(m.field(), m.dim(), m.dim())));
}

// the conjugation action of M on itself, rho(m_i) = ad(m_i)
inline Action conjugation(const LieAlgebra& m) {
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < m.dim(); ++i) mats.push_back(m.ad(i));
  return Action(m, m, std::move(mats));
}

struct ActionCheck {
  enum class Axiom { homomorphism, derivation };
  bool ok = true;
  Axiom axiom = Axiom::homomorphism;
  std::size_t i = 0, j = 0, k = 0; // homomorphism: actor pair (i,j); derivation: (actor i, target j,k)
  Vec defect;

  std::string axiom_name() const {
    return axiom == Axiom::homomorphism ? "homomorphism" : "derivation";
  }
};

inline ActionCheck check_action(const Action& a) {
  std::size_t np = a.actor.dim(), nm = a.target.dim();
  const Field& fld = a.target.field();
  // rho([p,p']) = rho(p) rho(p') - rho(p') rho(p)
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j) {
      Matrix lhs = a.rho_of(a.actor.bracket_basis(i, j));
      Matrix rhs = a.rho[i] * a.rho[j] - a.rho[j] * a.rho[i];
      Matrix d = lhs - rhs;
      if (!d.is_zero()) {
        for (std::size_t c = 0; c < nm; ++c)
          if (!is_zero_vec(d.col(c)))
            return {false, ActionCheck::Axiom::homomorphism, i, j, c, d.col(c)};
      }
    }
  // p.[m,m'] = [p.m, m'] + [m, p.m']
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t i = 0; i < nm; ++i)
      for (std::size_t j = i + 1; j < nm; ++j) {
        Vec lhs = a.rho[p].apply(a.target.bracket_basis(i, j));
        Vec rhs = add(a.target.bracket(a.act_basis(p, i), unit_vec(fld, nm, j)),
                      a.target.bracket(unit_vec(fld, nm, i), a.act_basis(p, j)));
        Vec d = sub(std::move(lhs), rhs);
        if (!is_zero_vec(d)) return {false, ActionCheck::Axiom::derivation, p, i, j, d};
      }
  return {};
}

struct CompatCheck {
  bool ok = true;
  int equation = 0;          // 1: (n.m).n' = [n', m.n]   2: (m.n).m' = [m', n.m]
  std::size_t m = 0, n = 0, third = 0;
  Vec defect;
};

// Compatibility of mutual actions; equation 1 is checked first, both in
// lexicographic order of (m, n, third).
inline CompatCheck check_compatible(const Action& mn, const Action& nm) {
  const LieAlgebra& M = mn.actor;
  const LieAlgebra& N = mn.target;
  if (!(nm.actor == N) || !(nm.target == M))
    throw ActionError("check_compatible expects mutual actions between the same pair");
  for (std::size_t m = 0; m < M.dim(); ++m)
    for (std::size_t n = 0; n < N.dim(); ++n)
      for (std::size_t t = 0; t < N.dim(); ++t) {
        Vec u = nm.act_basis(n, m); // n.m in M
        Vec lhs = mn.act(u, unit_vec(N.field(), N.dim(), t));
        Vec rhs = N.bracket(unit_vec(N.field(), N.dim(), t), mn.act_basis(m, n));
        Vec d = sub(std::move(lhs), rhs);
        if (!is_zero_vec(d)) return {false, 1, m, n, t, d};
      }
  for (std::size_t m = 0; m < M.dim(); ++m)
    for (std::size_t n = 0; n < N.dim(); ++n)
      for (std::size_t t = 0; t < M.dim(); ++t) {
        Vec w = mn.act_basis(m, n); // m.n in N
        Vec lhs = nm.act(w, unit_vec(M.field(), M.dim(), t));
        Vec rhs = M.bracket(unit_vec(M.field(), M.dim(), t), nm.act_basis(n, m));
        Vec d = sub(std::move(lhs), rhs);
        if (!is_zero_vec(d)) return {false, 2, m, n, t, d};
      }
  return {};
}

// A value carried by a subword during evaluation: the algebra it lives in
// (by tag) and its coordinates there.
struct Valued {
  std::string tag;
  Vec v;
};

// Maps letters outside the registered bases (substituted values) to Valued.
using LeafResolver = std::function<std::optional<Valued>(const Letter&)>;

// Environment for evaluating mixed words: algebras keyed by origin tag and
// actions keyed by (actor tag, target tag).  Unregistered tag pairs are a
// hard error rather than a silent zero.
struct ActionEnv {
  std::map<std::string, const LieAlgebra*> algebras;
  std::map<std::pair<std::string, std::string>, const Action*> actions;

  ActionEnv& add_algebra(const std::string& tag, const LieAlgebra& a) {
    algebras[tag] = &a;
    return *this;
  }
  ActionEnv& add_action(const std::string& actor_tag, const std::string& target_tag,
                        const Action& a) {
    actions[{actor_tag, target_tag}] = &a;
    return *this;
  }

  const LieAlgebra& algebra(const std::string& tag) const {
    auto it = algebras.find(tag);
    if (it == algebras.end()) throw ActionError("no algebra registered for tag " + tag);
    return *it->second;
  }
};

// Innermost-first evaluation of a mixed word.  Same-tag pairs use that
// algebra's bracket; for a mixed pair the left argument acts on the right
// through the registered action (or the flipped action with a sign).
inline Valued evaluate_valued(const ActionEnv& env, const MagmaTerm& t,
                              const LeafResolver& resolver = {}) {
  if (t.is_leaf()) {
    const Letter& l = t.letter();
    if (resolver) {
      if (auto r = resolver(l)) return *r;
    }
    const LieAlgebra& a = env.algebra(l.origin);
    auto idx = a.index_of(l.name);
    if (!idx) throw ActionError("letter " + l.name + " is not a basis element of " + l.origin);
    return {l.origin, unit_vec(a.field(), a.dim(), *idx)};
  }
  Valued l = evaluate_valued(env, t.left(), resolver);
  Valued r = evaluate_valued(env, t.right(), resolver);
  if (l.tag == r.tag) return {l.tag, env.algebra(l.tag).bracket(l.v, r.v)};
  if (auto it = env.actions.find({l.tag, r.tag}); it != env.actions.end())
    return {r.tag, it->second->act(l.v, r.v)};
  if (auto it = env.actions.find({r.tag, l.tag}); it != env.actions.end())
    return {l.tag, negated(it->second->act(r.v, l.v))};
  throw ActionError("unresolved tag pair (" + l.tag + "," + r.tag + ")");
}

inline Vec evaluate_word(const ActionEnv& env, const MagmaTerm& t, const std::string& home,
                         const LeafResolver& resolver = {}) {
  Valued out = evaluate_valued(env, t, resolver);
  if (out.tag != home)
    throw ActionError("word evaluates into " + out.tag + ", expected " + home);
  return out.v;
}

// Value of the internal action of the coproduct on a word anchored at a
// designated letter: the word is first rewritten into right-nested words
// ending in the anchor, then each word is folded innermost-first.
inline Vec coproduct_action_value(const ActionEnv& env, const MagmaTerm& t, const Letter& anchor,
                                  const std::string& home, const LeafResolver& resolver = {}) {
  const LieAlgebra& h = env.algebra(home);
  const Field& fld = h.field();
  NormalForm nf = normalize_pinned(LieExpr(fld.one(), t), anchor);
  Vec acc = zero_vec(fld, h.dim());
  for (const auto& [c, w] : nf)
    add_scaled(acc, c, evaluate_word(env, w.to_term(), home, resolver));
  return acc;
}

} // namespace liexmod
