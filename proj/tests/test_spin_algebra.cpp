#include "spinpair/spin_algebra.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace spinpair;
using testutil::max_abs;
using testutil::max_abs_diff;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("single-spin components obey angular momentum algebra") {
  const SpinOperators& ops = spin_operators();
  CHECK(max_abs_diff(commutator(ops.ix, ops.iy), (kI * ops.iz).eval()) == 0.0);
  CHECK(max_abs_diff(commutator(ops.sx, ops.sy), (kI * ops.sz).eval()) == 0.0);
  CHECK(max_abs(commutator(ops.ix, ops.sy)) == 0.0);  // different particles
  CHECK(max_abs_diff(commutator(ops.fz, ops.fx), (kI * ops.fy).eval()) == 0.0);
}

TEST_CASE("commutator of an operator with itself vanishes") {
  std::mt19937 rng(7);
  const Operator a = testutil::random_hermitian(rng);
  CHECK(max_abs(commutator(a, a)) == 0.0);
}

TEST_CASE("collective operators combine both particles") {
  const SpinOperators& ops = spin_operators();
  CHECK(max_abs_diff(ops.fx, (ops.ix + ops.sx).eval()) == 0.0);
  CHECK(max_abs_diff(ops.fzz, (ops.iz * ops.sz).eval()) == 0.0);
  CHECK(max_abs_diff(ops.fzx, (ops.iz * ops.sx + ops.ix * ops.sz).eval()) == 0.0);
  CHECK(ops.fx(0, 1) == Complex(0.5, 0.0));  // <uu| Fx |ud> = 1/2
  for (const Operator* op : {&ops.fx, &ops.fy, &ops.fz, &ops.fzz, &ops.fxx,
                             &ops.fyy, &ops.fzx, &ops.fzy, &ops.fxy}) {
    CHECK(max_abs_diff(*op, op->adjoint().eval()) == 0.0);
    CHECK(std::abs(op->trace()) == 0.0);
  }
}

TEST_CASE("standard basis is orthogonal with the expected norms") {
  const TwoSpinBasis& basis = TwoSpinBasis::standard();
  const double expected_diag[16] = {4.0,  2.0,  2.0,  2.0,  0.25, 0.25,
                                    0.25, 0.5,  0.5,  0.5,  2.0,  2.0,
                                    2.0,  0.5,  0.5,  0.5};
  for (int a = 0; a < 16; ++a) {
    CHECK(basis.gram(a, a) == doctest::Approx(expected_diag[a]).epsilon(1e-14));
    for (int b = 0; b < 16; ++b) {
      if (a != b) CHECK(std::abs(basis.gram(a, b)) < 1e-14);
    }
  }
  // Spot checks straight from the operators.
  const SpinOperators& ops = spin_operators();
  CHECK(std::abs((ops.fx * ops.fy).trace()) == 0.0);
  CHECK((ops.fzx * ops.fzx).trace().real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(basis.labels[kFx] == "Fx");
  CHECK(basis.labels[kIdentity] == "1");
}

TEST_CASE("vectorization round-trips and linearizes the commutator") {
  std::mt19937 rng(11);
  const Operator h = testutil::random_hermitian(rng);
  const Operator x = testutil::random_hermitian(rng);

  CHECK(max_abs_diff(unvectorize(vectorize(x)), x) == 0.0);

  const SuperVector lhs = adjoint_action(h) * vectorize(x);
  const SuperVector rhs = vectorize(commutator(h, x));
  CHECK(max_abs_diff(lhs, rhs) < 1e-14 * max_abs(rhs));
}

TEST_CASE("expansion recovers exact coefficients") {
  const TwoSpinBasis& basis = TwoSpinBasis::standard();
  const SpinOperators& ops = spin_operators();

  SUBCASE("identity multiple") {
    const Coefficients16 c = expand_in_basis((0.25 * ops.identity).eval(), basis);
    CHECK(c(kIdentity) == doctest::Approx(0.25).epsilon(1e-15));
    for (int a = 1; a < 16; ++a) CHECK(std::abs(c(a)) < 1e-15);
  }

  SUBCASE("transverse initial state") {
    const Operator rho = 0.25 * ops.identity + 0.5 * ops.fx;
    const Coefficients16 c = expand_in_basis(rho, basis);
    CHECK(c(kIdentity) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(c(kFx) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(c(kFzz)) < 1e-15);
    CHECK(std::abs(c(kAx)) < 1e-15);
  }

  SUBCASE("random Hermitian operator reconstructs") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
      const Operator a = testutil::random_hermitian(rng);
      const Coefficients16 c = expand_in_basis(a, basis);
      Operator rebuilt = Operator::Zero();
      for (int k = 0; k < 16; ++k) rebuilt += c(k) * basis.elements[k];
      CHECK(max_abs_diff(rebuilt, a) < 1e-12 * std::max(1.0, max_abs(a)));
    }
  }

  SUBCASE("non-Hermitian input is rejected") {
    Operator bad = Operator::Zero();
    bad(0, 1) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(expand_in_basis(bad, basis), NonHermitianObservable);
  }
}

TEST_CASE("expectation values") {
  const SpinOperators& ops = spin_operators();
  const Operator rho = 0.25 * ops.identity + 0.5 * ops.fx;

  CHECK(expectation(ops.identity, rho) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expectation(ops.fx, rho) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(expectation(ops.fzz, rho)) < 1e-15);
  CHECK(std::abs(expectation(ops.fy, rho)) < 1e-15);

  Operator bad = Operator::Zero();
  bad(1, 0) = Complex(0.0, 2.0);
  bad(0, 1) = Complex(0.0, 2.0);  // not Hermitian: (0,1) should be -2i
  CHECK_THROWS_AS(expectation(bad, rho), NonHermitianObservable);

  DensityState state{rho, 0.0};
  CHECK(expectation(ops.fx, state) == doctest::Approx(1.0).epsilon(1e-15));
}
