#include "liexmod/xmod.hpp"

#include "support/corpus.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace liexmod;
using namespace testsupport;

TEST_CASE("check_xmod") {
  SECTION("the zero crossed module over any base") {
    CHECK(check_xmod(zero_xmod(sl2())).ok);
    CHECK(check_xmod(zero_xmod(heisenberg())).ok);
  }

  SECTION("identity with conjugation") {
    CHECK(check_xmod(identity_xmod(sl2())).ok);
    CHECK(check_xmod(identity_xmod(heisenberg())).ok);
    CHECK(check_xmod(identity_xmod(nonabelian2())).ok);
  }

  SECTION("the Heisenberg center inclusion") {
    CHECK(check_xmod(ideal_xmod(heisenberg(), {2}, "Z")).ok);
    // the center is killed by every bracket, so the zero boundary works too
    CHECK(check_xmod(ideal_xmod(heisenberg(), {2}, "Z", true)).ok);
  }

  SECTION("the ideal <e2> of the nonabelian 2-dim algebra") {
    CHECK(check_xmod(ideal_xmod(nonabelian2(), {1}, "I")).ok);
  }

  SECTION("a genuine failure: nonabelian top, zero boundary, zero action") {
    LieAlgebra top = nonabelian2("T");
    LieAlgebra base = abelian("B", 1);
    CrossedModule x(top, base, LinearMap::zero(top, base), zero_action(base, top));
    auto check = check_xmod(x);
    REQUIRE(!check.ok);
    CHECK(check.family == XmodCheck::Family::peiffer);
    CHECK(check.i == 0);
    CHECK(check.j == 1);
  }
}

TEST_CASE("check_xmod_morphism") {
  LieAlgebra H = heisenberg();
  CrossedModule center = ideal_xmod(H, {2}, "Z");
  CrossedModule idH = identity_xmod(H);

  SECTION("the center inclusion into the identity crossed module") {
    Matrix incl(QQ(), 3, 1);
    incl.at(2, 0) = QQ().one();
    XModMorphism f(center, idH, LinearMap(center.top, idH.top, incl));
    CHECK(check_xmod_morphism(f).ok);
  }

  SECTION("a map breaking the boundary triangle") {
    Matrix wrong(QQ(), 3, 1);
    wrong.at(0, 0) = QQ().one(); // z maps to x instead of z
    XModMorphism f(center, idH, LinearMap(center.top, idH.top, wrong));
    auto check = check_xmod_morphism(f);
    REQUIRE(!check.ok);
    CHECK(check.family == XmodMorphismCheck::Family::boundary_triangle);
  }
}

TEST_CASE("induced_actions") {
  SECTION("two identity crossed modules induce conjugation both ways") {
    CrossedModule x = identity_xmod(sl2());
    auto [mn, nm] = induced_actions(x, x);
    Action conj = conjugation(sl2());
    CHECK(mn.rho == conj.rho);
    CHECK(nm.rho == conj.rho);
    CHECK(check_compatible(mn, nm).ok);
  }

  SECTION("a zero crossed module induces zero actions") {
    auto [mn, nm] = induced_actions(zero_xmod(sl2()), identity_xmod(sl2()));
    CHECK(mn.actor.dim() == 0);
    for (const auto& r : nm.rho) CHECK(r.is_zero());
    CHECK(check_compatible(mn, nm).ok);
  }

  SECTION("the corpus pairs over common bases are all compatible") {
    std::vector<std::pair<CrossedModule, CrossedModule>> pairs;
    pairs.emplace_back(identity_xmod(sl2()), identity_xmod(sl2()));
    pairs.emplace_back(zero_xmod(sl2()), identity_xmod(sl2()));
    pairs.emplace_back(ideal_xmod(heisenberg(), {2}, "Z"), identity_xmod(heisenberg()));
    pairs.emplace_back(ideal_xmod(heisenberg(), {2}, "Z"), ideal_xmod(heisenberg(), {2}, "Z'"));
    pairs.emplace_back(ideal_xmod(nonabelian2(), {1}, "I"), identity_xmod(nonabelian2()));
    pairs.emplace_back(zero_xmod(heisenberg()), ideal_xmod(heisenberg(), {2}, "Z"));
    for (const auto& [xm, xn] : pairs) {
      auto [mn, nm] = induced_actions(xm, xn);
      CHECK(check_action(mn).ok);
      CHECK(check_action(nm).ok);
      CHECK(check_compatible(mn, nm).ok);
    }
  }
}

TEST_CASE("peiffer_xmods") {
  SECTION("zero actions: both inclusions into the direct sum") {
    auto p = zero_pair(nonabelian2(), heisenberg());
    auto px = peiffer_xmods(p.M, p.N, p.mn, p.nm);
    CHECK(px.ok());
    CHECK(px.failures.empty());
    CHECK(px.recovered);
    CHECK(px.peiffer.carrier.dim() == 5);
    CHECK(check_xmod(px.xm).ok);
    CHECK(check_xmod(px.xn).ok);
  }

  SECTION("the sl2 conjugation pair: both boundaries are isomorphisms") {
    auto p = conjugation_pair(sl2());
    auto px = peiffer_xmods(p.M, p.N, p.mn, p.nm);
    CHECK(px.ok());
    CHECK(rref(px.xm.boundary.mat).pivots.size() == 3);
    CHECK(rref(px.xn.boundary.mat).pivots.size() == 3);
    CHECK(px.xm.boundary.mat == px.xn.boundary.mat);
  }

  SECTION("the incompatible witness produces a recorded failure") {
    auto p = incompatible_pair();
    auto px = peiffer_xmods(p.M, p.N, p.mn, p.nm);
    CHECK(!px.ok());
    CHECK(!px.failures.empty());
  }
}

TEST_CASE("action_on_peiffer") {
  SECTION("L = 0 acts by nothing") {
    auto p = zero_pair(nonabelian2(), abelian("B", 1));
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    LieAlgebra l = zero_algebra("L");
    Action a = action_on_peiffer(l, zero_action(l, p.M), zero_action(l, p.N), pr);
    CHECK(a.rho.empty());
  }

  SECTION("all-conjugation sl2: the induced action is conjugation of the carrier") {
    auto p = conjugation_pair(sl2());
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    LieAlgebra l = sl2("L");
    // L = sl2 acts on both copies by the adjoint action
    std::vector<Matrix> ad;
    for (std::size_t i = 0; i < 3; ++i) ad.push_back(sl2().ad(i));
    Action lm(l, p.M, ad), ln(l, p.N, ad);
    Action psi = action_on_peiffer(l, lm, ln, pr);
    CHECK(check_action(psi).ok);
    Action conj_carrier = conjugation(pr.carrier);
    for (std::size_t i = 0; i < 3; ++i) {
      // l_M identifies L with the carrier here
      Matrix expected = conj_carrier.rho_of(pr.lM.apply_basis(i));
      CHECK(psi.rho[i] == expected);
    }
  }

  SECTION("a base action that does not respect the mixed relations is rejected") {
    auto q = QQ();
    // M = <m1,m2>, N = <n1,n2> abelian, m1 fixes n1, everything else trivial;
    // n1 collapses.  L moves n1 to the surviving n2 without touching M, so
    // l.(m1.n1 - [m1,n1]) has a nonzero image in the carrier.
    LieAlgebra m = retag(abelian("M", 2), "M");
    LieAlgebra n = retag(abelian("N", 2), "N");
    Matrix fix_n1(q, 2, 2);
    fix_n1.at(0, 0) = q.one();
    Action mn(m, n, {fix_n1, Matrix(q, 2, 2)});
    Action nm = zero_action(n, m);
    REQUIRE(check_action(mn).ok);
    REQUIRE(check_compatible(mn, nm).ok);
    auto pr = peiffer_saturate(m, n, mn, nm);
    REQUIRE(pr.carrier.dim() == 3);
    LieAlgebra l = abelian("L", 1);
    Matrix move(q, 2, 2);
    move.at(1, 0) = q.one(); // n1 -> n2
    Action ln(l, n, {move});
    Action lm = zero_action(l, m);
    REQUIRE(check_action(ln).ok);
    CHECK_THROWS_AS(action_on_peiffer(l, lm, ln, pr), RestrictionFailure);
  }

  SECTION("zero mutual actions: the induced action is the blockwise one") {
    auto q = QQ();
    LieAlgebra l = abelian("L", 1);
    auto p = zero_pair(abelian("A", 2), abelian("B", 1));
    Matrix shift(q, 2, 2);
    shift.at(0, 1) = q.one();
    Action lm(l, p.M, {shift});
    Action ln = zero_action(l, p.N);
    REQUIRE(check_action(lm).ok);
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    Action psi = action_on_peiffer(l, lm, ln, pr);
    // carrier = A (+) B with the blockwise action
    REQUIRE(pr.carrier.dim() == 3);
    Matrix expected(q, 3, 3);
    expected.at(0, 1) = q.one();
    CHECK(psi.rho[0] == expected);
  }
}

TEST_CASE("copair_xmod") {
  SECTION("two identity sl2 crossed modules") {
    CrossedModule x = identity_xmod(sl2());
    auto co = copair_xmod(x, x);
    CHECK(check_xmod(co.xmod).ok);
    CHECK(co.xmod.top.dim() == 3);
    // the boundary is onto
    CHECK(rref(co.xmod.boundary.mat).pivots.size() == 3);
    CHECK(check_xmod_morphism(co.incl_m).ok);
    CHECK(check_xmod_morphism(co.incl_n).ok);
  }

  SECTION("coproduct with the zero crossed module is the other factor") {
    CrossedModule xn = identity_xmod(heisenberg());
    auto co = copair_xmod(zero_xmod(heisenberg()), xn);
    CHECK(co.xmod.top.dim() == 3);
    CHECK(check_xmod(co.xmod).ok);
    // boundary agrees with nu under l_N
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(co.xmod.boundary.apply(co.construction.peiffer.lN.apply_basis(j)) ==
            xn.boundary.apply_basis(j));
  }

  SECTION("zero-boundary abelian tops give an abelian carrier") {
    auto q = QQ();
    LieAlgebra l = abelian("L", 1);
    LieAlgebra top = abelian("T", 2);
    Matrix shift(q, 2, 2);
    shift.at(0, 1) = q.one();
    CrossedModule x(top, l, LinearMap::zero(top, l), Action(l, top, {shift}));
    REQUIRE(check_xmod(x).ok);
    auto co = copair_xmod(x, x);
    CHECK(co.xmod.boundary.mat.is_zero());
    CHECK(check_xmod(co.xmod).ok);
    for (std::size_t i = 0; i < co.xmod.top.dim(); ++i)
      for (std::size_t j = 0; j < co.xmod.top.dim(); ++j)
        CHECK(is_zero_vec(co.xmod.top.bracket_basis(i, j)));
  }

  SECTION("the Heisenberg center against the identity") {
    auto co = copair_xmod(ideal_xmod(heisenberg(), {2}, "Z"), identity_xmod(heisenberg()));
    CHECK(check_xmod(co.xmod).ok);
    CHECK(check_xmod_morphism(co.incl_m).ok);
    CHECK(check_xmod_morphism(co.incl_n).ok);
  }
}

TEST_CASE("xmod_coproduct_mediator") {
  SECTION("self target: the mediator is the identity") {
    CrossedModule x = identity_xmod(sl2());
    auto co = copair_xmod(x, x);
    auto med = xmod_coproduct_mediator(co, co.xmod, co.incl_m, co.incl_n);
    CHECK(med.mediator.mat == Matrix::identity(QQ(), co.xmod.top.dim()));
    CHECK(med.unique_by_spanning);
  }

  SECTION("mediating two identity maps onto sl2") {
    CrossedModule x = identity_xmod(sl2());
    auto co = copair_xmod(x, x);
    XModMorphism zm(x, x, LinearMap::identity(sl2()));
    XModMorphism zn(x, x, LinearMap::identity(sl2()));
    auto med = xmod_coproduct_mediator(co, x, zm, zn);
    CHECK(med.unique_by_spanning);
    // f l_M = id under the identification
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(med.mediator.apply(co.construction.peiffer.lM.apply_basis(i)) ==
            unit_vec(QQ(), 3, i));
  }

  SECTION("coproduct with zero: the mediator is the canonical isomorphism") {
    CrossedModule xm = identity_xmod(heisenberg());
    CrossedModule xn = zero_xmod(heisenberg());
    auto co = copair_xmod(xm, xn);
    XModMorphism zm(xm, xm, LinearMap::identity(heisenberg()));
    XModMorphism zn(xn, xm, LinearMap::zero(xn.top, xm.top));
    auto med = xmod_coproduct_mediator(co, xm, zm, zn);
    CHECK(med.unique_by_spanning);
    CHECK(rref(med.mediator.mat).pivots.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(med.mediator.apply(co.construction.peiffer.lM.apply_basis(i)) ==
            unit_vec(QQ(), 3, i));
  }

  SECTION("the Heisenberg center instance") {
    LieAlgebra H = heisenberg();
    CrossedModule xm = ideal_xmod(H, {2}, "Z");
    CrossedModule xn = identity_xmod(H);
    auto co = copair_xmod(xm, xn);
    Matrix incl(QQ(), 3, 1);
    incl.at(2, 0) = QQ().one();
    XModMorphism zm(xm, xn, LinearMap(xm.top, H, incl));
    XModMorphism zn(xn, xn, LinearMap::identity(H));
    auto med = xmod_coproduct_mediator(co, xn, zm, zn);
    CHECK(med.unique_by_spanning);
    CHECK(check_xmod_morphism(XModMorphism(co.xmod, xn, med.mediator)).ok);
  }
}

TEST_CASE("theorem_roundtrip") {
  SECTION("zero actions round-trip as compatible") {
    auto p = zero_pair(nonabelian2(), heisenberg());
    auto rep = theorem_roundtrip(p.M, p.N, p.mn, p.nm);
    CHECK(rep.compat.ok);
    CHECK(rep.construction_ok);
    CHECK(rep.coherent());
  }

  SECTION("the sl2 conjugation pair round-trips as compatible") {
    auto p = conjugation_pair(sl2());
    auto rep = theorem_roundtrip(p.M, p.N, p.mn, p.nm);
    CHECK(rep.compat.ok);
    CHECK(rep.construction_ok);
    CHECK(rep.coherent());
  }

  SECTION("the collapsing pair round-trips as compatible") {
    auto p = collapsing_pair();
    auto rep = theorem_roundtrip(p.M, p.N, p.mn, p.nm);
    CHECK(rep.compat.ok);
    CHECK(rep.construction_ok);
    CHECK(rep.coherent());
  }

  SECTION("the incompatible witness round-trips as incompatible") {
    auto p = incompatible_pair();
    auto rep = theorem_roundtrip(p.M, p.N, p.mn, p.nm);
    CHECK(!rep.compat.ok);
    CHECK(!rep.construction_ok);
    CHECK(!rep.construction.failures.empty());
    CHECK(rep.coherent());
  }
}
