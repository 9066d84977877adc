#include <doctest.h>

#include <cmath>

#include "reelab/dicke.hpp"

using namespace reelab;

namespace {

double amp(const PureState& psi, std::initializer_list<int> digits) {
  const std::vector<int> d(digits);
  return psi.amplitudes()[psi.layout().index_of(d)].real();
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("binomials") {
  CHECK(binomial(5, 2) == doctest::Approx(10.0));
  CHECK(binomial(7, 0) == doctest::Approx(1.0));
  CHECK(std::exp(log_binomial(20, 10)) == doctest::Approx(184756.0));
  CHECK_THROWS_AS(DickeIndex(3, 4), ValidationError);
}

TEST_CASE("qubit Dicke vectors") {
  const auto s11 = dicke_state_vector(DickeIndex(1, 1));
  CHECK(amp(s11, {0}) == doctest::Approx(1.0));

  const auto s21 = dicke_state_vector(DickeIndex(2, 1));
  CHECK(amp(s21, {0, 1}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(amp(s21, {1, 0}) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const auto w = dicke_state_vector(DickeIndex(3, 2));
  for (auto d : {std::vector<int>{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})
    CHECK(w.amplitudes()[w.layout().index_of(d)].real() == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(w.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("qudit Dicke vectors") {
  const auto s = qudit_dicke_state_vector(QuditComposition({2, 0}));
  CHECK(amp(s, {0, 0}) == doctest::Approx(1.0));

  // Labels 1..4 are levels 0..3.
  const auto a = qudit_dicke_state_vector(QuditComposition({2, 0, 0, 1}));
  for (auto d : {std::vector<int>{0, 0, 3}, {0, 3, 0}, {3, 0, 0}})
    CHECK(a.amplitudes()[a.layout().index_of(d)].real() == doctest::Approx(1.0 / std::sqrt(3.0)));

  const auto b = qudit_dicke_state_vector(QuditComposition({1, 1, 1, 0}));
  int nonzero = 0;
  for (Index i = 0; i < b.amplitudes().size(); ++i)
    if (std::abs(b.amplitudes()[i]) > 1e-12) {
      ++nonzero;
      CHECK(b.amplitudes()[i].real() == doctest::Approx(1.0 / std::sqrt(6.0)));
    }
  CHECK(nonzero == 6);
}

TEST_CASE("compositions enumerate in descending lexicographic order") {
  const auto c = enumerate_compositions(3, 3);
  CHECK(c.size() == 10);
  CHECK(c.front().counts() == std::vector<int>{3, 0, 0});
  CHECK(c.back().counts() == std::vector<int>{0, 0, 3});
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(composition_position(c[i]) == i);
  CHECK(QuditComposition({1, 1, 1, 0}).multinomial() == doctest::Approx(6.0));
}

TEST_CASE("mixture densities") {
  SUBCASE("vertex is a pure projector") {
    const auto rho = mixture_density(DickeMixture(2, {1.0, 0.0, 0.0}));
    // k = 0 zeros: |11>
    CHECK(rho.matrix()(3, 3).real() == doctest::Approx(1.0));
  }
  SUBCASE("two-qubit family s|11><11| + (1-s)|Psi+><Psi+|") {
    const double s = 0.3;
    const auto rho = mixture_density(DickeMixture::two_component(2, 0, 1, s));
    Matrix expect = Matrix::Zero(4, 4);
    expect(3, 3) = s;
    expect(1, 1) = expect(2, 2) = expect(1, 2) = expect(2, 1) = (1.0 - s) / 2.0;
    CHECK(max_diff(rho.matrix(), expect) < 1e-15);
  }
  SUBCASE("spectrum is the weights plus zeros") {
    const auto rho = mixture_density(DickeMixture(3, {0.1, 0.2, 0.3, 0.4}));
    const auto es = hermitian_eigensystem(rho.matrix());
    CHECK(es.values[7] == doctest::Approx(0.4));
    CHECK(es.values[6] == doctest::Approx(0.3));
    CHECK(es.values[5] == doctest::Approx(0.2));
    CHECK(es.values[4] == doctest::Approx(0.1));
    CHECK(std::abs(es.values[3]) < 1e-14);
  }
  CHECK_THROWS_AS(DickeMixture(2, {0.5, 0.6, 0.0}), ValidationError);
  CHECK_THROWS_AS(DickeMixture(2, {1.2, -0.2, 0.0}), ValidationError);
}

TEST_CASE("Dicke partial trace") {
  const auto once = partial_trace_dicke(DickeMixture::pure(DickeIndex(4, 1)), 1);
  CHECK(once.weight(1) == doctest::Approx(0.75));
  CHECK(once.weight(0) == doctest::Approx(0.25));
  const auto twice = partial_trace_dicke(once, 1);
  CHECK(twice.weight(0) == doctest::Approx(0.5));
  CHECK(twice.weight(1) == doctest::Approx(0.5));
  const auto direct = partial_trace_dicke(DickeMixture::pure(DickeIndex(4, 1)), 2);
  CHECK(direct.weight(0) == doctest::Approx(0.5));

  SUBCASE("agrees with the full-space partial trace") {
    const DickeMixture m(4, {0.1, 0.3, 0.2, 0.15, 0.25});
    for (int party = 0; party < 4; ++party) {
      const auto full = partial_trace(mixture_density(m), {party});
      CHECK(max_diff(full.matrix(), mixture_density(partial_trace_dicke(m, 1)).matrix()) < 1e-14);
    }
  }
  CHECK_THROWS_AS(partial_trace_dicke(DickeMixture::pure(DickeIndex(2, 1)), 2), ValidationError);
}

TEST_CASE("copy collapse") {
  SUBCASE("one copy is a relabeling") {
    const SymmetricQubitState psi{2, {0.6, 0.0, 0.8}};
    const auto q = collapse_copies(1, psi);
    CHECK(q.d == 2);
    const auto a = embed(psi), b = embed(q);
    CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-14);
  }
  SUBCASE("two copies of W") {
    const SymmetricQubitState w{3, {0.0, 0.0, 1.0, 0.0}};
    const auto q = collapse_copies(2, w);
    CHECK(q.n == 3);
    CHECK(q.d == 4);
    const auto comps = enumerate_compositions(3, 4);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double a = std::abs(q.amplitudes[i]);
      if (comps[i].counts() == std::vector<int>{2, 0, 0, 1})
        CHECK(a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
      else if (comps[i].counts() == std::vector<int>{1, 1, 1, 0})
        CHECK(a == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
      else
        CHECK(a < 1e-12);
    }
    // Against the explicit 64-dimensional tensor product, party-regrouped.
    const auto ww = tensor_product(embed(w), embed(w));
    const auto grouped = embed(q);
    for (Index i = 0; i < 64; ++i) {
      const auto d = grouped.layout().digits(i);
      std::vector<int> bits(6);
      for (int p = 0; p < 3; ++p) {
        bits[static_cast<std::size_t>(p)] = d[static_cast<std::size_t>(p)] / 2;
        bits[static_cast<std::size_t>(p + 3)] = d[static_cast<std::size_t>(p)] % 2;
      }
      CHECK(std::abs(grouped.amplitudes()[i] - ww.amplitudes()[ww.layout().index_of(bits)]) < 1e-12);
    }
  }
  SUBCASE("two copies of S(2,1) against the 16-dim tensor") {
    const SymmetricQubitState s{2, {0.0, 1.0, 0.0}};
    const auto q = collapse_copies(2, s);
    const auto ss = tensor_product(embed(s), embed(s));
    const auto grouped = embed(q);
    for (Index i = 0; i < 16; ++i) {
      const auto d = grouped.layout().digits(i);
      const std::vector<int> bits{d[0] / 2, d[1] / 2, d[0] % 2, d[1] % 2};
      CHECK(std::abs(grouped.amplitudes()[i] - ss.amplitudes()[ss.layout().index_of(bits)]) < 1e-12);
    }
  }
  SUBCASE("mixture collapse gives an ensemble summing to rho^{(x)2}") {
    const auto m = DickeMixture::two_component(2, 0, 1, 0.4);
    const auto ensemble = collapse_copies(2, m);
    double total = 0.0;
    for (const auto& [w, st] : ensemble) total += w;
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("product overlaps") {
  const int n = 4;
  const double p = 0.3;
  std::vector<double> angles(n, std::acos(std::sqrt(p)));
  const auto phi = ProductState::from_angles(angles);
  CHECK(std::abs(product_overlap(DickeIndex(n, n), ProductState::from_angles(std::vector<double>(n, 0.0)))) ==
        doctest::Approx(1.0));
  for (int k = 0; k <= n; ++k)
    CHECK(std::abs(product_overlap(DickeIndex(n, k), phi)) ==
          doctest::Approx(std::sqrt(binomial(n, k) * std::pow(p, k) * std::pow(1 - p, n - k))));

  SUBCASE("agrees with the explicit inner product") {
    Rng rng(3);
    const auto l = HilbertLayout::uniform(3, 3);
    const auto r = random_product_state(l, rng);
    for (const auto& c : enumerate_compositions(3, 3)) {
      const cplx direct = qudit_dicke_state_vector(c).amplitudes().dot(r.to_vector());
      CHECK(std::abs(product_overlap(c, r) - direct) < 1e-12);
    }
  }
}
