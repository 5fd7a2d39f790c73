#pragma once

// Crossed modules of Lie algebras and everything the compatibility theorem
// needs: the axiom checker, actions induced by a pair of crossed modules
// over a common base, the two crossed-module structures carried by the
// Peiffer product, the transferred base action, the copairing boundary, the
// coproduct mediator, and the two-way theorem round trip.

#include "liexmod/action.hpp"
#include "liexmod/copro.hpp"
#include "liexmod/liealg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liexmod {

class XmodError : public std::runtime_error {
public:
  explicit XmodError(const std::string& msg) : std::runtime_error(msg) {}
};

class RestrictionFailure : public XmodError {
public:
  RestrictionFailure(std::size_t l, std::size_t m, std::size_t n, Vec defect)
      : XmodError("the base action does not restrict to the Peiffer relations at (l=" +
                  std::to_string(l) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                  ")"),
        l(l), m(m), n(n), defect(std::move(defect)) {}
  std::size_t l, m, n;
  Vec defect;
};

class WellDefinednessFailure : public XmodError {
public:
  explicit WellDefinednessFailure(Vec witness)
      : XmodError("the candidate map does not kill the collapse subspace"),
        witness(std::move(witness)) {}
  Vec witness;
};

class TriangleFailure : public XmodError {
public:
  TriangleFailure(const std::string& which, std::size_t index)
      : XmodError("triangle " + which + " fails at basis element " + std::to_string(index)),
        which(which), index(index) {}
  std::string which;
  std::size_t index;
};

struct CrossedModule {
  LieAlgebra top, base;
  LinearMap boundary; // top -> base
  Action act;         // base acting on top

  CrossedModule(LieAlgebra t, LieAlgebra b, LinearMap d, Action a)
      : top(std::move(t)), base(std::move(b)), boundary(std::move(d)), act(std::move(a)) {
    if (!(boundary.domain == top) || !(boundary.codomain == base))
      throw std::logic_error("boundary must map top to base");
    if (!(act.actor == base) || !(act.target == top))
      throw std::logic_error("the action must be of the base on the top");
  }
};

struct XmodCheck {
  enum class Family { boundary_morphism, action, peiffer, equivariance };
  bool ok = true;
  Family family = Family::peiffer;
  std::size_t i = 0, j = 0;
  Vec defect;

  std::string family_name() const {
    switch (family) {
      case Family::boundary_morphism: return "boundary morphism";
      case Family::action: return "action axioms";
      case Family::peiffer: return "peiffer identity";
      default: return "equivariance";
    }
  }
};

// [m,m'] = (d m).m' and d(p.m) = [p, d m], on top of the boundary being a
// morphism and the action satisfying its axioms.
inline XmodCheck check_xmod(const CrossedModule& x) {
  if (auto c = check_morphism(x.boundary); !c.ok)
    return {false, XmodCheck::Family::boundary_morphism, c.i, c.j, c.defect};
  if (auto c = check_action(x.act); !c.ok)
    return {false, XmodCheck::Family::action, c.i, c.j, c.defect};
  std::size_t nt = x.top.dim();
  const Field& fld = x.top.field();
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      Vec lhs = x.top.bracket_basis(i, j);
      Vec rhs = x.act.act(x.boundary.apply_basis(i), unit_vec(fld, nt, j));
      Vec d = sub(lhs, rhs);
      if (!is_zero_vec(d)) return {false, XmodCheck::Family::peiffer, i, j, d};
    }
  for (std::size_t p = 0; p < x.base.dim(); ++p)
    for (std::size_t i = 0; i < nt; ++i) {
      Vec lhs = x.boundary.apply(x.act.act_basis(p, i));
      Vec rhs = x.base.bracket(unit_vec(fld, x.base.dim(), p), x.boundary.apply_basis(i));
      Vec d = sub(std::move(lhs), rhs);
      if (!is_zero_vec(d)) return {false, XmodCheck::Family::equivariance, p, i, d};
    }
  return {};
}

// Morphism of crossed modules over a fixed base: the base map is the
// identity, the top map must commute with boundaries and the action.
struct XModMorphism {
  CrossedModule source, target;
  LinearMap top;

  XModMorphism(CrossedModule s, CrossedModule t, LinearMap f)
      : source(std::move(s)), target(std::move(t)), top(std::move(f)) {
    if (!(source.base == target.base))
      throw std::logic_error("crossed-module morphisms here fix the base");
    if (!(top.domain == source.top) || !(top.codomain == target.top))
      throw std::logic_error("top map has wrong domain or codomain");
  }
};

struct XmodMorphismCheck {
  enum class Family { morphism, boundary_triangle, equivariance };
  bool ok = true;
  Family family = Family::morphism;
  std::size_t i = 0, j = 0;
  Vec defect;

  std::string family_name() const {
    switch (family) {
      case Family::morphism: return "morphism";
      case Family::boundary_triangle: return "boundary triangle";
      default: return "equivariance";
    }
  }
};

inline XmodMorphismCheck check_xmod_morphism(const XModMorphism& f) {
  if (auto c = check_morphism(f.top); !c.ok)
    return {false, XmodMorphismCheck::Family::morphism, c.i, c.j, c.defect};
  for (std::size_t i = 0; i < f.source.top.dim(); ++i) {
    Vec d = sub(f.target.boundary.apply(f.top.apply_basis(i)), f.source.boundary.apply_basis(i));
    if (!is_zero_vec(d)) return {false, XmodMorphismCheck::Family::boundary_triangle, i, 0, d};
  }
  for (std::size_t p = 0; p < f.source.base.dim(); ++p)
    for (std::size_t i = 0; i < f.source.top.dim(); ++i) {
      Vec lhs = f.top.apply(f.source.act.act_basis(p, i));
      Vec rhs = f.target.act.act(unit_vec(f.source.base.field(), f.source.base.dim(), p),
                                 f.top.apply_basis(i));
      Vec d = sub(std::move(lhs), rhs);
      if (!is_zero_vec(d)) return {false, XmodMorphismCheck::Family::equivariance, p, i, d};
    }
  return {};
}

// Actions induced by two crossed modules over a common base:
// m.n = (mu m).n and n.m = (nu n).m.  These are compatible.
inline std::pair<Action, Action> induced_actions(const CrossedModule& xm,
                                                 const CrossedModule& xn) {
  if (!(xm.base == xn.base))
    throw XmodError("induced actions need crossed modules over a common base");
  if (auto c = check_xmod(xm); !c.ok)
    throw XmodError("first crossed module fails " + c.family_name());
  if (auto c = check_xmod(xn); !c.ok)
    throw XmodError("second crossed module fails " + c.family_name());
  const LieAlgebra& m = xm.top;
  const LieAlgebra& n = xn.top;
  std::vector<Matrix> mn_mats, nm_mats;
  for (std::size_t i = 0; i < m.dim(); ++i)
    mn_mats.push_back(xn.act.rho_of(xm.boundary.apply_basis(i)));
  for (std::size_t j = 0; j < n.dim(); ++j)
    nm_mats.push_back(xm.act.rho_of(xn.boundary.apply_basis(j)));
  return {Action(m, n, std::move(mn_mats)), Action(n, m, std::move(nm_mats))};
}

// The two crossed-module structures on the Peiffer product.  Built for any
// pair of mutual actions; every failed axiom is recorded instead of thrown,
// so the construction doubles as the negative arm of the theorem.
struct PeifferXmods {
  PeifferResult peiffer;
  Action act_on_m, act_on_n; // carrier actions, via canonical representatives
  CrossedModule xm, xn;      // (M -> carrier) and (N -> carrier)
  std::vector<std::string> failures;
  bool recovered = false; // the induced actions return the inputs exactly

  bool ok() const { return failures.empty() && recovered; }
};

inline PeifferXmods peiffer_xmods(const LieAlgebra& m, const LieAlgebra& n, const Action& mn,
                                  const Action& nm) {
  PeifferResult pr = peiffer_saturate(m, n, mn, nm);
  const Field& fld = pr.space.field();
  std::size_t md = m.dim(), nd = n.dim();
  std::vector<std::string> failures;

  // the class of a letter acts through its representative: an M letter by
  // the bracket, an N letter by the mutual action
  auto letter_action_on_m = [&](std::size_t col) {
    return col < md ? pr.space.M.ad(col) : nm.rho[col - md];
  };
  auto letter_action_on_n = [&](std::size_t col) {
    return col < md ? mn.rho[col] : pr.space.N.ad(col - md);
  };

  // representative independence: W must act trivially on both sides
  for (std::size_t r = 0; r < pr.W.dim(); ++r) {
    Vec w = pr.W.basis_row(r);
    Matrix on_m(fld, md, md), on_n(fld, nd, nd);
    for (std::size_t c = 0; c < md + nd; ++c) {
      if (w[c].is_zero()) continue;
      Matrix am = letter_action_on_m(c);
      Matrix an = letter_action_on_n(c);
      for (std::size_t i = 0; i < md; ++i)
        for (std::size_t j = 0; j < md; ++j) on_m.at(i, j) += w[c] * am.at(i, j);
      for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = 0; j < nd; ++j) on_n.at(i, j) += w[c] * an.at(i, j);
    }
    if (!on_m.is_zero())
      failures.push_back("collapse subspace acts nontrivially on M (row " + std::to_string(r) +
                         "): the induced carrier action on M is ill defined");
    if (!on_n.is_zero())
      failures.push_back("collapse subspace acts nontrivially on N (row " + std::to_string(r) +
                         ")");
  }

  std::vector<bool> is_pivot(md + nd, false);
  for (auto p : pr.W.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < md + nd; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  std::vector<Matrix> rho_m, rho_n;
  for (auto c : free_cols) {
    rho_m.push_back(letter_action_on_m(c));
    rho_n.push_back(letter_action_on_n(c));
  }
  Action act_on_m(pr.carrier, m, std::move(rho_m));
  Action act_on_n(pr.carrier, n, std::move(rho_n));

  if (auto c = check_action(act_on_m); !c.ok)
    failures.push_back("carrier action on M violates the " + c.axiom_name() + " axiom at (" +
                       std::to_string(c.i) + "," + std::to_string(c.j) + ")");
  if (auto c = check_action(act_on_n); !c.ok)
    failures.push_back("carrier action on N violates the " + c.axiom_name() + " axiom at (" +
                       std::to_string(c.i) + "," + std::to_string(c.j) + ")");

  CrossedModule xm(m, pr.carrier, pr.lM, act_on_m);
  CrossedModule xn(n, pr.carrier, pr.lN, act_on_n);
  if (auto c = check_xmod(xm); !c.ok)
    failures.push_back("(M -> carrier) fails the " + c.family_name() + " at (" +
                       std::to_string(c.i) + "," + std::to_string(c.j) + ")");
  if (auto c = check_xmod(xn); !c.ok)
    failures.push_back("(N -> carrier) fails the " + c.family_name() + " at (" +
                       std::to_string(c.i) + "," + std::to_string(c.j) + ")");

  // do the crossed-module structures give back the actions we started from?
  bool recovered = true;
  for (std::size_t i = 0; i < md; ++i)
    if (!(act_on_n.rho_of(xm.boundary.apply_basis(i)) == mn.rho[i])) recovered = false;
  for (std::size_t j = 0; j < nd; ++j)
    if (!(act_on_m.rho_of(xn.boundary.apply_basis(j)) == nm.rho[j])) recovered = false;
  if (!recovered)
    failures.push_back("the induced actions do not recover the original actions");

  return PeifferXmods{std::move(pr), std::move(act_on_m), std::move(act_on_n), std::move(xm),
                      std::move(xn), std::move(failures), recovered};
}

// The action of L on M (+) N descends to the Peiffer product when the
// mixed-bracket relations are stable under it: for every l, m, n the images
// of l.(n.m - [n,m]) and l.(m.n - [m,n]) under the carrier projection must
// vanish.
inline Action action_on_peiffer(const LieAlgebra& l, const Action& lm, const Action& ln,
                                const PeifferResult& pr) {
  if (auto c = check_action(lm); !c.ok)
    throw XmodError("action of L on M violates the " + c.axiom_name() + " axiom");
  if (auto c = check_action(ln); !c.ok)
    throw XmodError("action of L on N violates the " + c.axiom_name() + " axiom");
  const LieAlgebra& m = pr.space.M;
  const LieAlgebra& n = pr.space.N;
  const Field& fld = pr.space.field();
  std::size_t md = m.dim(), nd = n.dim();

  for (std::size_t li = 0; li < l.dim(); ++li)
    for (std::size_t mi = 0; mi < md; ++mi)
      for (std::size_t ni = 0; ni < nd; ++ni) {
        // l.(n.m) - (l.n).m - n.(l.m), projected
        Vec a = lm.rho[li].apply(pr.nm.act_basis(ni, mi));
        Vec b = pr.nm.act(ln.act_basis(li, ni), unit_vec(fld, md, mi));
        Vec c = pr.nm.rho[ni].apply(lm.act_basis(li, mi));
        Vec dm = sub(sub(std::move(a), b), c);
        Vec qm = pr.projection.apply(pr.space.embed(dm, zero_vec(fld, nd)));
        if (!is_zero_vec(qm)) throw RestrictionFailure(li, mi, ni, qm);
        // l.(m.n) - (l.m).n - m.(l.n), projected
        Vec a2 = ln.rho[li].apply(pr.mn.act_basis(mi, ni));
        Vec b2 = pr.mn.act(lm.act_basis(li, mi), unit_vec(fld, nd, ni));
        Vec c2 = pr.mn.rho[mi].apply(ln.act_basis(li, ni));
        Vec dn = sub(sub(std::move(a2), b2), c2);
        Vec qn = pr.projection.apply(pr.space.embed(zero_vec(fld, md), dn));
        if (!is_zero_vec(qn)) throw RestrictionFailure(li, mi, ni, qn);
      }

  // blockwise action must also stabilize W itself
  for (std::size_t li = 0; li < l.dim(); ++li)
    for (std::size_t r = 0; r < pr.W.dim(); ++r) {
      Vec w = pr.W.basis_row(r);
      Vec img = pr.space.embed(lm.act(unit_vec(fld, l.dim(), li), pr.space.part_m(w)),
                               ln.act(unit_vec(fld, l.dim(), li), pr.space.part_n(w)));
      if (!pr.W.contains(img))
        throw XmodError("base action does not stabilize the collapse subspace");
    }

  std::vector<bool> is_pivot(md + nd, false);
  for (auto p : pr.W.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < md + nd; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  std::size_t q = pr.carrier.dim();
  std::vector<Matrix> rho(l.dim(), Matrix(fld, q, q));
  for (std::size_t li = 0; li < l.dim(); ++li)
    for (std::size_t k = 0; k < q; ++k) {
      std::size_t c = free_cols[k];
      Vec img;
      if (c < md)
        img = pr.space.embed(lm.act_basis(li, c), zero_vec(fld, nd));
      else
        img = pr.space.embed(zero_vec(fld, md), ln.act_basis(li, c - md));
      rho[li].set_col(k, pr.projection.apply(img));
    }
  Action out(l, pr.carrier, std::move(rho));
  if (auto c = check_action(out); !c.ok)
    throw XmodError("induced action on the Peiffer product violates the " + c.axiom_name() +
                    " axiom");
  return out;
}

// The coproduct of two crossed modules over L: the Peiffer product of the
// induced actions, the transferred action of L, and the copaired boundary.
struct CopairResult {
  PeifferXmods construction;
  Action base_action;      // L on the carrier
  CrossedModule xmod;      // carrier -> L
  XModMorphism incl_m, incl_n; // (l_M, 1_L) and (l_N, 1_L)
};

inline CopairResult copair_xmod(const CrossedModule& xm, const CrossedModule& xn) {
  auto [mn, nm] = induced_actions(xm, xn); // validates both crossed modules
  PeifferXmods px = peiffer_xmods(xm.top, xn.top, mn, nm);
  if (!px.ok())
    throw XmodError("Peiffer crossed-module construction failed: " + px.failures.front());
  const PeifferResult& pr = px.peiffer;
  const LieAlgebra& l = xm.base;
  const Field& fld = l.field();

  Action psi = action_on_peiffer(l, xm.act, xn.act, pr);

  // boundary <mu,nu>: well defined because W maps to zero
  std::size_t md = xm.top.dim(), nd = xn.top.dim();
  for (std::size_t r = 0; r < pr.W.dim(); ++r) {
    Vec w = pr.W.basis_row(r);
    Vec img = add(xm.boundary.apply(pr.space.part_m(w)), xn.boundary.apply(pr.space.part_n(w)));
    if (!is_zero_vec(img)) throw WellDefinednessFailure(w);
  }
  std::vector<bool> is_pivot(md + nd, false);
  for (auto p : pr.W.pivots()) is_pivot[p] = true;
  Matrix bnd(fld, l.dim(), pr.carrier.dim());
  std::size_t k = 0;
  for (std::size_t c = 0; c < md + nd; ++c) {
    if (is_pivot[c]) continue;
    bnd.set_col(k++, c < md ? xm.boundary.apply_basis(c)
                            : xn.boundary.apply_basis(c - md));
  }
  LinearMap copaired(pr.carrier, l, std::move(bnd));

  CrossedModule result(pr.carrier, l, copaired, psi);
  if (auto c = check_xmod(result); !c.ok)
    throw XmodError("copaired crossed module fails the " + c.family_name());

  // triangles <mu,nu> l_M = mu and <mu,nu> l_N = nu
  for (std::size_t i = 0; i < md; ++i)
    if (!(copaired.apply(pr.lM.apply_basis(i)) == xm.boundary.apply_basis(i)))
      throw TriangleFailure("<mu,nu> l_M = mu", i);
  for (std::size_t j = 0; j < nd; ++j)
    if (!(copaired.apply(pr.lN.apply_basis(j)) == xn.boundary.apply_basis(j)))
      throw TriangleFailure("<mu,nu> l_N = nu", j);

  XModMorphism incl_m(xm, result, pr.lM);
  XModMorphism incl_n(xn, result, pr.lN);
  if (auto c = check_xmod_morphism(incl_m); !c.ok)
    throw XmodError("(l_M, 1_L) fails " + c.family_name());
  if (auto c = check_xmod_morphism(incl_n); !c.ok)
    throw XmodError("(l_N, 1_L) fails " + c.family_name());

  return CopairResult{std::move(px), std::move(psi), std::move(result), std::move(incl_m),
                      std::move(incl_n)};
}

struct MediatorResult {
  LinearMap mediator; // carrier -> Z
  bool unique_by_spanning;
};

// The coproduct mediator: the unique crossed-module morphism f with
// f l_M = z_M and f l_N = z_N.
inline MediatorResult xmod_coproduct_mediator(const CopairResult& p, const CrossedModule& xz,
                                              const XModMorphism& z_m, const XModMorphism& z_n) {
  if (auto c = check_xmod(xz); !c.ok)
    throw XmodError("target crossed module fails the " + c.family_name());
  if (auto c = check_xmod_morphism(z_m); !c.ok)
    throw XmodError("z_M is not a crossed-module morphism: " + c.family_name());
  if (auto c = check_xmod_morphism(z_n); !c.ok)
    throw XmodError("z_N is not a crossed-module morphism: " + c.family_name());

  const PeifferResult& pr = p.construction.peiffer;
  const LieAlgebra& z = xz.top;
  const Field& fld = z.field();
  std::size_t md = pr.space.M.dim(), nd = pr.space.N.dim();

  // well-definedness: (z_M (+) z_N)(W) = 0
  for (std::size_t r = 0; r < pr.W.dim(); ++r) {
    Vec w = pr.W.basis_row(r);
    Vec img = add(z_m.top.apply(pr.space.part_m(w)), z_n.top.apply(pr.space.part_n(w)));
    if (!is_zero_vec(img)) throw WellDefinednessFailure(w);
  }

  std::vector<bool> is_pivot(md + nd, false);
  for (auto piv : pr.W.pivots()) is_pivot[piv] = true;
  Matrix fm(fld, z.dim(), pr.carrier.dim());
  std::size_t k = 0;
  for (std::size_t c = 0; c < md + nd; ++c) {
    if (is_pivot[c]) continue;
    fm.set_col(k++, c < md ? z_m.top.apply_basis(c) : z_n.top.apply_basis(c - md));
  }
  LinearMap f(pr.carrier, z, std::move(fm));

  // triangles, exactly
  for (std::size_t i = 0; i < md; ++i)
    if (!(f.apply(pr.lM.apply_basis(i)) == z_m.top.apply_basis(i)))
      throw TriangleFailure("f l_M = z_M", i);
  for (std::size_t j = 0; j < nd; ++j)
    if (!(f.apply(pr.lN.apply_basis(j)) == z_n.top.apply_basis(j)))
      throw TriangleFailure("f l_N = z_N", j);

  XModMorphism as_morphism(p.xmod, xz, f);
  if (auto c = check_xmod_morphism(as_morphism); !c.ok)
    throw XmodError("mediator is not a crossed-module morphism: " + c.family_name());

  // uniqueness through spanning: the images of l_M and l_N span the carrier,
  // so any map agreeing on them is the mediator
  std::size_t q = pr.carrier.dim();
  Matrix span(fld, q, md + nd);
  for (std::size_t i = 0; i < md; ++i) span.set_col(i, pr.lM.apply_basis(i));
  for (std::size_t j = 0; j < nd; ++j) span.set_col(md + j, pr.lN.apply_basis(j));
  bool unique = rref(span).pivots.size() == q;
  if (unique) {
    // reconstruct the map from its prescribed values on the spanning set
    Matrix g(fld, z.dim(), q);
    for (std::size_t c = 0; c < q; ++c) {
      auto x = solve(span, unit_vec(fld, q, c));
      if (!x) { unique = false; break; }
      Vec val = zero_vec(fld, z.dim());
      for (std::size_t i = 0; i < md; ++i) add_scaled(val, (*x)[i], z_m.top.apply_basis(i));
      for (std::size_t j = 0; j < nd; ++j) add_scaled(val, (*x)[md + j], z_n.top.apply_basis(j));
      g.set_col(c, val);
    }
    if (unique && !(g == f.mat)) unique = false;
  }
  return MediatorResult{std::move(f), unique};
}

// The two directions of the compatibility theorem on one instance: the
// verdict of the equational check must agree with the outcome of the
// constructive route through the Peiffer product.
struct RoundtripReport {
  CompatCheck compat;
  PeifferXmods construction;
  bool construction_ok;

  bool coherent() const { return compat.ok == construction_ok; }
};

inline RoundtripReport theorem_roundtrip(const LieAlgebra& m, const LieAlgebra& n,
                                         const Action& mn, const Action& nm) {
  CompatCheck compat = check_compatible(mn, nm);
  PeifferXmods px = peiffer_xmods(m, n, mn, nm);
  bool ok = px.ok();
  return RoundtripReport{std::move(compat), std::move(px), ok};
}

} // namespace liexmod
