#include "liexmod/copro.hpp"

#include "support/corpus.hpp"
#include "support/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace liexmod;
using namespace testsupport;

TEST_CASE("truncated coproduct of two lines") {
  LieAlgebra a = abelian("A", 1);
  LieAlgebra b = abelian("B", 1);

  SECTION("class 2 has dimension 3") {
    auto co = truncated_coproduct(a, b, 2);
    CHECK(co.dim() == 3);
    REQUIRE(co.quotient.has_value());
    CHECK(check_jacobi(co.quotient->algebra).ok);
  }

  SECTION("class 3 has dimension 5") {
    auto co = truncated_coproduct(a, b, 3);
    CHECK(co.dim() == 5);
  }

  SECTION("inclusions are morphisms and the fold retracts them") {
    auto co = truncated_coproduct(a, b, 3);
    REQUIRE(co.include_m.has_value());
    CHECK(check_morphism(*co.include_m).ok);
    CHECK(check_morphism(*co.include_n).ok);
    LinearMap round = compose(*co.fold_m, *co.include_m);
    CHECK(round.mat == Matrix::identity(QQ(), 1));
  }
}

TEST_CASE("truncated coproduct with the zero algebra") {
  LieAlgebra a = abelian("A", 1);
  auto co = truncated_coproduct(a, zero_algebra(), 3);
  CHECK(co.dim() == 1);
  REQUIRE(co.quotient.has_value());
  LinearMap round = compose(*co.fold_m, *co.include_m);
  CHECK(round.mat == Matrix::identity(QQ(), 1));
}

TEST_CASE("truncated coproduct with structure relations") {
  // heis + line at class 2: letters x,y,z,a; the within-brackets of the
  // Heisenberg side collapse to degree 1, and words like [a,z] = [a,[x,y]]
  // fall out of the class
  auto co = truncated_coproduct(heisenberg(), abelian("A", 1), 2);
  CHECK(co.dim() == 6); // x, y, z, a, [a,x], [a,y]
  CHECK(co.profile()[1] == 4);
  CHECK(co.profile()[2] == 2);
  // the windowed relation ideal is smaller than the projected one
  CHECK(co.model.profile()[2] == 3);
  REQUIRE(co.quotient.has_value());
  CHECK(check_jacobi(co.quotient->algebra).ok);
  CHECK(check_morphism(*co.include_m).ok);
  REQUIRE(co.fold_m.has_value());
  LinearMap round = compose(*co.fold_m, *co.include_m);
  CHECK(round.mat == Matrix::identity(QQ(), 3));
}

TEST_CASE("degree one never collapses in a truncated free product") {
  for (std::size_t cls = 2; cls <= 3; ++cls) {
    auto co = truncated_coproduct(sl2(), sl2("sl2b"), cls);
    CHECK(co.model.degree_one_collapse().dim() == 0);
    CHECK(co.model.profile()[1] == 6);
  }
}

TEST_CASE("flat object") {
  SECTION("two lines at class 2: kernel is spanned by m and [p,m]") {
    auto fl = flat_object(abelian("P", 1), abelian("M", 1), 2);
    CHECK(fl.flat_dim == 2);
    CHECK(fl.fold_kernel.dim() == 2);
    CHECK(fl.matches_saturation());
  }

  SECTION("P = 0 gives the whole truncation of M") {
    auto fl = flat_object(zero_algebra(), abelian("M", 1), 3);
    CHECK(fl.flat_dim == 1);
    CHECK(fl.matches_saturation());
  }

  SECTION("M = 0 gives the zero subspace") {
    auto fl = flat_object(heisenberg(), zero_algebra(), 3);
    CHECK(fl.flat_dim == 0);
    CHECK(fl.matches_saturation());
  }

  SECTION("saturation characterization on small corpus instances") {
    CHECK(flat_object(abelian("P", 2), abelian("M", 1), 3).matches_saturation());
    CHECK(flat_object(abelian("P", 1), abelian("M", 1), 4).matches_saturation());
    CHECK(flat_object(nonabelian2(), abelian("M", 1), 3).matches_saturation());
    CHECK(flat_object(heisenberg(), abelian("M", 1), 3).matches_saturation());
  }
}

TEST_CASE("peiffer_saturate") {
  SECTION("zero actions give the direct product") {
    auto p = zero_pair(sl2(), heisenberg());
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    CHECK(pr.W.dim() == 0);
    CHECK(pr.carrier.dim() == 6);
    CHECK(check_jacobi(pr.carrier).ok);
    // l_M, l_N are the two inclusions
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(pr.lM.apply_basis(i) == unit_vec(QQ(), 6, i));
      CHECK(pr.lN.apply_basis(i) == unit_vec(QQ(), 6, 3 + i));
    }
    // mixed brackets vanish
    CHECK(is_zero_vec(pr.carrier.bracket(pr.lM.apply_basis(1), pr.lN.apply_basis(0))));
  }

  SECTION("the collapsing pair collapses N") {
    auto p = collapsing_pair();
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    CHECK(pr.carrier.dim() == 1);
    CHECK(pr.W.dim() == 1);
    // W = span{(0, n)}
    CHECK(pr.W.basis_row(0) == Vec{QQ().zero(), QQ().one()});
    CHECK(pr.lN.mat.is_zero());
    CHECK(!pr.lM.mat.is_zero());
  }

  SECTION("the sl2 conjugation pair collapses onto one copy") {
    auto p = conjugation_pair(sl2());
    auto pr = peiffer_saturate(p.M, p.N, p.mn, p.nm);
    CHECK(pr.carrier.dim() == 3);
    CHECK(pr.W.dim() == 3);
    // W is the antidiagonal {(x, -x)}
    for (std::size_t i = 0; i < 3; ++i) {
      Vec v = zero_vec(QQ(), 6);
      v[i] = QQ().one();
      v[3 + i] = QQ().from_int(-1);
      CHECK(pr.W.contains(v));
    }
    CHECK(pr.lM.mat == pr.lN.mat);
    CHECK(rref(pr.lM.mat).pivots.size() == 3); // bijective
    CHECK(check_jacobi(pr.carrier).ok);
    // the images of l_M and l_N span the carrier
    Matrix span(QQ(), 3, 6);
    for (std::size_t i = 0; i < 3; ++i) {
      span.set_col(i, pr.lM.apply_basis(i));
      span.set_col(3 + i, pr.lN.apply_basis(i));
    }
    CHECK(rref(span).pivots.size() == pr.carrier.dim());
  }

  SECTION("invalid actions are rejected") {
    LieAlgebra m = retag(abelian("P", 1), "M");
    LieAlgebra n = retag(sl2(), "N");
    Action bad(m, n, {Matrix::identity(QQ(), 3)});
    CHECK_THROWS_AS(peiffer_saturate(m, n, bad, zero_action(n, m)), PeifferError);
  }
}

TEST_CASE("peiffer_truncated") {
  SECTION("zero actions keep the full degree-1 block at every class") {
    auto p = zero_pair(sl2(), abelian("B", 2));
    for (std::size_t cls = 2; cls <= 4; ++cls) {
      auto tr = peiffer_truncated(p.M, p.N, p.mn, p.nm, cls);
      CHECK(tr.dim == 5);
      CHECK(tr.degree1_concentrated);
      CHECK(tr.W.dim() == 0);
    }
  }

  SECTION("the collapsing pair has dimension 1 at class 3") {
    auto p = collapsing_pair();
    auto tr = peiffer_truncated(p.M, p.N, p.mn, p.nm, 3);
    CHECK(tr.dim == 1);
    CHECK(tr.degree1_concentrated);
    CHECK(tr.W.dim() == 1);
  }

  SECTION("the sl2 conjugation pair has dimension 3 at class 3") {
    auto p = conjugation_pair(sl2());
    auto tr = peiffer_truncated(p.M, p.N, p.mn, p.nm, 3);
    CHECK(tr.dim == 3);
    CHECK(tr.degree1_concentrated);
    REQUIRE(tr.carrier.has_value());
    CHECK(check_jacobi(*tr.carrier).ok);
  }
}

TEST_CASE("the two Peiffer algorithms agree") {
  auto check_agreement = [](const LieAlgebra& m, const LieAlgebra& n, const Action& mn,
                            const Action& nm, std::size_t expected_dim) {
    auto sat = peiffer_saturate(m, n, mn, nm);
    CHECK(sat.carrier.dim() == expected_dim);
    auto rep = peiffer_oracle_agreement(m, n, mn, nm, sat, 2, 4);
    CHECK(rep.stabilized);
    CHECK(rep.at_class <= 4);
    CHECK(rep.agree);
  };

  auto z = zero_pair(nonabelian2(), abelian("B", 1));
  check_agreement(z.M, z.N, z.mn, z.nm, 3);
  auto c = collapsing_pair();
  check_agreement(c.M, c.N, c.mn, c.nm, 1);
  auto s = conjugation_pair(sl2());
  check_agreement(s.M, s.N, s.mn, s.nm, 3);
  auto i = incompatible_pair();
  check_agreement(i.M, i.N, i.mn, i.nm, 2);
}

TEST_CASE("oracle agreement on random compatible pairs") {
  // cross-validate the two algorithms away from the fixed corpus
  testsupport::Rng rng(2024);
  auto q = QQ();
  int done = 0;
  while (done < 12) {
    // abelian pairs with a random one-sided action: always valid, often
    // collapsing in interesting ways, always compatible when one side is 0
    std::size_t md = 1 + rng.below(2), nd = 1 + rng.below(2);
    LieAlgebra m = retag(abelian("M", md), "M");
    LieAlgebra n = retag(abelian("N", nd), "N");
    Matrix rho(q, nd, nd);
    for (std::size_t r = 0; r < nd; ++r)
      for (std::size_t c = 0; c < nd; ++c) rho.at(r, c) = q.from_int(rng.range(-1, 1));
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < md; ++i) mats.push_back(i == 0 ? rho : Matrix(q, nd, nd));
    Action mn(m, n, mats);
    Action nm = zero_action(n, m);
    if (!check_action(mn).ok || !check_compatible(mn, nm).ok) continue;
    auto sat = peiffer_saturate(m, n, mn, nm);
    auto rep = peiffer_oracle_agreement(m, n, mn, nm, sat, 2, 5);
    CHECK(rep.stabilized);
    CHECK(rep.agree);
    ++done;
  }
}

TEST_CASE("check_coequalizer_property") {
  SECTION("zero-action instance up to depth 3") {
    auto p = zero_pair(nonabelian2(), abelian("B", 1));
    CHECK(check_coequalizer_property(p.M, p.N, p.mn, p.nm, 3).ok);
  }

  SECTION("the sl2 conjugation instance") {
    auto p = conjugation_pair(sl2());
    CHECK(check_coequalizer_property(p.M, p.N, p.mn, p.nm, 2).ok);
  }

  SECTION("the collapsing pair up to depth 3") {
    auto p = collapsing_pair();
    CHECK(check_coequalizer_property(p.M, p.N, p.mn, p.nm, 3).ok);
  }

  SECTION("fails on the incompatible witness") {
    auto p = incompatible_pair();
    auto check = check_coequalizer_property(p.M, p.N, p.mn, p.nm, 2);
    CHECK(!check.ok);
  }
}
