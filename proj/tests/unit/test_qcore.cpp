#include <doctest.h>

#include <cmath>
#include <limits>

#include "reelab/qcore.hpp"

using namespace reelab;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

Vector ket(std::initializer_list<cplx> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (cplx x : v) out[i++] = x;
  return out;
}

DensityOperator werner(double gamma) {
  const Vector psi = ket({0.0, 1.0, -1.0, 0.0}) / std::sqrt(2.0);
  Matrix m = gamma * psi * psi.adjoint() + (1.0 - gamma) * Matrix::Identity(4, 4) / 4.0;
  return DensityOperator(HilbertLayout::qubits(2), m);
}

}  // namespace

TEST_CASE("layout digits round-trip with party 0 most significant") {
  const HilbertLayout l({2, 3, 2});
  CHECK(l.total_dim() == 12);
  CHECK(l.stride(0) == 6);
  CHECK(l.stride(2) == 1);
  for (Index i = 0; i < l.total_dim(); ++i) CHECK(l.index_of(l.digits(i)) == i);
  CHECK(l.digits(7) == std::vector<int>{1, 0, 1});
  CHECK_THROWS_AS(HilbertLayout({2, 0}), ValidationError);
}

TEST_CASE("state constructors validate their invariants") {
  const auto l = HilbertLayout::qubits(1);
  CHECK_THROWS_AS(PureState(l, ket({1.0, 1.0})), ValidationError);
  CHECK_NOTHROW(PureState::normalized(l, ket({1.0, 1.0})));
  CHECK_THROWS_AS(DensityOperator(l, diag({0.5, 0.6})), ValidationError);
  CHECK_THROWS_AS(DensityOperator(l, diag({1.5, -0.5})), ValidationError);
  Matrix skew = diag({0.5, 0.5});
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityOperator(l, skew), ValidationError);
}

TEST_CASE("hermitian eigensystem") {
  SUBCASE("identity") {
    const auto es = hermitian_eigensystem(Matrix::Identity(2, 2));
    CHECK(es.values[0] == doctest::Approx(1.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
  }
  SUBCASE("diagonal input, ascending order") {
    const auto es = hermitian_eigensystem(diag({0.75, 0.25}));
    CHECK(es.values[0] == doctest::Approx(0.25));
    CHECK(es.values[1] == doctest::Approx(0.75));
  }
  SUBCASE("random 8x8 reconstruction") {
    Rng rng(7);
    const Matrix u = random_unitary(8, rng);
    Matrix h = u * diag({-2, -1, 0, 0.5, 1, 1, 3, 4}) * u.adjoint();
    h = 0.5 * (h + h.adjoint());
    const auto es = hermitian_eigensystem(h);
    const Matrix back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    CHECK((back - h).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("non-Hermitian input is rejected") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigensystem(m), ValidationError);
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityOperator::from_pure(PureState::basis(HilbertLayout::qubits(2), 3))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityOperator::maximally_mixed(HilbertLayout::qubits(1))) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(werner(1.0 / 3.0)) == doctest::Approx(1.0 + std::log2(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("relative entropy") {
  const auto l = HilbertLayout::qubits(1);
  const DensityOperator zero(l, diag({1, 0})), one(l, diag({0, 1}));
  CHECK(relative_entropy(zero, zero) == doctest::Approx(0.0));
  CHECK(std::isinf(relative_entropy(zero, one)));

  SUBCASE("two-qubit Dicke mixture against its dephased product mixture") {
    // rho = (|11><11| + |Psi+><Psi+|)/2, sigma = (cos t|0> + sin t|1>)^2 dephased, cos^2 t = 1/4
    const auto l2 = HilbertLayout::qubits(2);
    const Vector psi = ket({0.0, 1.0, 1.0, 0.0}) / std::sqrt(2.0);
    Matrix rho = 0.5 * psi * psi.adjoint();
    rho(3, 3) += 0.5;
    const double c = 0.25, s = 0.75;
    Matrix sigma = Matrix::Zero(4, 4);
    sigma(0, 0) = c * c;
    sigma(3, 3) = s * s;
    sigma += 2.0 * c * s * psi * psi.adjoint();
    CHECK(relative_entropy(DensityOperator(l2, rho), DensityOperator(l2, sigma)) ==
          doctest::Approx(0.5 * std::log2(32.0 / 27.0)).epsilon(1e-12));
  }

  SUBCASE("Klein inequality on random pairs") {
    Rng rng(11);
    const auto l3 = HilbertLayout::qubits(3);
    for (int i = 0; i < 50; ++i) {
      const auto a = random_density(l3, 1 + i % 8, rng);
      const auto b = random_density(l3, 8, rng);
      CHECK(relative_entropy(a, b) >= 0.0);
    }
  }

  SUBCASE("joint convexity spot checks") {
    Rng rng(12);
    const auto l2 = HilbertLayout::qubits(2);
    for (int i = 0; i < 20; ++i) {
      const auto r1 = random_density(l2, 4, rng), r2 = random_density(l2, 4, rng);
      const auto s1 = random_density(l2, 4, rng), s2 = random_density(l2, 4, rng);
      const double t = 0.3;
      const DensityOperator rm(l2, t * r1.matrix() + (1 - t) * r2.matrix());
      const DensityOperator sm(l2, t * s1.matrix() + (1 - t) * s2.matrix());
      CHECK(relative_entropy(rm, sm) <=
            t * relative_entropy(r1, s1) + (1 - t) * relative_entropy(r2, s2) + 1e-12);
    }
  }
}

TEST_CASE("partial trace") {
  const auto l2 = HilbertLayout::qubits(2);
  SUBCASE("product basis state") {
    const auto red = partial_trace(DensityOperator::from_pure(PureState::basis(l2, 0)), {1});
    CHECK(red.matrix()(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(red.matrix()(1, 1)) < 1e-15);
  }
  SUBCASE("Bell state reduces to I/2") {
    const auto bell = PureState(l2, ket({1.0, 0.0, 0.0, 1.0}) / std::sqrt(2.0));
    const auto red = partial_trace(DensityOperator::from_pure(bell), {1});
    CHECK((red.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("W state loses one party") {
    const auto l3 = HilbertLayout::qubits(3);
    const auto w = PureState(l3, ket({0, 1, 1, 0, 1, 0, 0, 0}) / std::sqrt(3.0));
    const auto red = partial_trace(DensityOperator::from_pure(w), {0});
    // (2/3)|S(2,1)><S(2,1)| + (1/3)|00>
    CHECK(red.matrix()(0, 0).real() == doctest::Approx(1.0 / 3.0));
    CHECK(red.matrix()(1, 2).real() == doctest::Approx(1.0 / 3.0));
    CHECK(red.matrix()(1, 1).real() == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(red.matrix()(3, 3)) < 1e-15);
  }
  SUBCASE("invalid party sets") {
    const auto rho = DensityOperator::maximally_mixed(l2);
    CHECK_THROWS_AS(partial_trace(rho, {}), ValidationError);
    CHECK_THROWS_AS(partial_trace(rho, {0, 1}), ValidationError);
    CHECK_THROWS_AS(partial_trace(rho, {2}), ValidationError);
  }
}

TEST_CASE("negativity") {
  const auto l2 = HilbertLayout::qubits(2);
  CHECK(negativity(DensityOperator::from_pure(PureState::basis(l2, 1)), {0}) == doctest::Approx(0.0));
  const auto bell = PureState(l2, ket({1.0, 0.0, 0.0, 1.0}) / std::sqrt(2.0));
  CHECK(negativity(DensityOperator::from_pure(bell), {0}) == doctest::Approx(0.5));
  CHECK(partial_transpose(DensityOperator::from_pure(bell), {1}).trace().real() == doctest::Approx(1.0));
}

TEST_CASE("tensor products") {
  const auto l1 = HilbertLayout::qubits(1);
  const auto ab = tensor_product(PureState::basis(l1, 0), PureState::basis(l1, 1));
  CHECK(std::abs(ab.amplitudes()[1] - cplx(1.0)) < 1e-15);
  const auto mixed = tensor_product(DensityOperator::maximally_mixed(l1), DensityOperator::maximally_mixed(l1));
  CHECK((mixed.matrix() - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(mixed.layout() == HilbertLayout::qubits(2));
}

TEST_CASE("random sampling is seeded and well formed") {
  Rng a(5), b(5);
  const auto l = HilbertLayout({2, 3});
  const auto pa = random_pure_state(l, a), pb = random_pure_state(l, b);
  CHECK((pa.amplitudes() - pb.amplitudes()).norm() == 0.0);
  CHECK(pa.amplitudes().norm() == doctest::Approx(1.0));
  const auto phi = random_product_state(l, a);
  CHECK(phi.to_vector().norm() == doctest::Approx(1.0));
  const Matrix u = random_unitary(5, a);
  CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}
