#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "effham.hpp"
#include "helpers.hpp"

using namespace respole;
using testing::kind_of;

namespace {

const Complex I(0.0, 1.0);

EffectiveHamiltonian two_level(double w, double gamma) {
  // [[0, w], [w, -i gamma]] realized as h0 = [[0,w],[w,0]], v = (0, 1), alpha = 2 gamma.
  RealMatrix h0(2, 2);
  h0 << 0, w, w, 0;
  RealVector v(2);
  v << 0, 1;
  return EffectiveHamiltonian(h0, {v}, 2.0 * gamma);
}

EffectiveHamiltonian random_hamiltonian(oracle::Gen& gen, std::size_t n, std::size_t c,
                                        double alpha) {
  RealMatrix h0(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      h0(i, j) = h0(j, i) = gen.normal();
    }
  }
  std::vector<RealVector> vs;
  for (std::size_t k = 0; k < c; ++k) {
    RealVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = gen.normal();
    vs.push_back(v);
  }
  return EffectiveHamiltonian(h0, vs, alpha);
}

double biorthogonality_residual(const BiorthogonalSpectrum& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t l = 0; l < s.size(); ++l) {
      const Complex p = bilinear(s.eigenvectors[l], s.eigenvectors[k]);
      worst = std::max(worst, std::abs(p - (k == l ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("assemble examples") {
  RealMatrix zero = RealMatrix::Zero(2, 2);
  RealVector ones(2);
  ones << 1, 1;
  const auto rank_one = EffectiveHamiltonian(zero, {ones}, 1.0).assemble();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) CHECK(rank_one(i, j) == Complex(0.0, -0.5));
  }

  RealMatrix h0(2, 2);
  h0 << -1, 0, 0, 1;
  RealVector e1(2);
  e1 << 1, 0;
  const auto m = EffectiveHamiltonian(h0, {e1}, 2.0).assemble();
  CHECK(m(0, 0) == Complex(-1.0, -1.0));
  CHECK(m(0, 1) == Complex(0.0, 0.0));
  CHECK(m(1, 0) == Complex(0.0, 0.0));
  CHECK(m(1, 1) == Complex(1.0, 0.0));

  const auto closed = EffectiveHamiltonian(h0, {e1}, 0.0).assemble();
  CHECK(closed.real() == h0);
  CHECK(closed.imag().isZero(0.0));
}

TEST_CASE("construction errors") {
  RealMatrix h0 = RealMatrix::Identity(3, 3);
  RealVector v3 = RealVector::Ones(3), v2 = RealVector::Ones(2);
  CHECK(kind_of([&] { EffectiveHamiltonian(h0, {v2}, 1.0); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { EffectiveHamiltonian(h0, {}, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { EffectiveHamiltonian(h0, {v3}, -1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { EffectiveHamiltonian(RealMatrix::Identity(1, 1), {RealVector::Ones(1)}, 1.0); }) ==
        ErrorKind::InvalidArgument);
  RealMatrix skew = h0;
  skew(0, 1) = 1e-6;
  CHECK(kind_of([&] { EffectiveHamiltonian(skew, {v3}, 1.0); }) == ErrorKind::InvalidArgument);
  skew(0, 1) = 1e-14;
  CHECK_NOTHROW(EffectiveHamiltonian(skew, {v3}, 1.0));
}

TEST_CASE("Hermitian limit") {
  RealMatrix h0(2, 2);
  h0 << 1, 0, 0, 2;
  const auto s = eigensolve_biorthogonal(EffectiveHamiltonian(h0, {RealVector::Ones(2)}, 0.0));
  CHECK(s.eigenvalues[0] == Complex(1.0, 0.0));
  CHECK(s.eigenvalues[1] == Complex(2.0, 0.0));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(s.width(k) == 0.0);
    CHECK(s.a_norms[k] == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(s.b_overlaps(0, 1) < 1e-15);
  for (double r : width_sum_rule_check(s)) CHECK(r == 0.0);
}

TEST_CASE("rank-one coupling traps one state") {
  const auto s = eigensolve_biorthogonal(
      EffectiveHamiltonian(RealMatrix::Zero(2, 2), {RealVector::Ones(2)}, 1.0));
  // Both real parts vanish; ties are broken by ascending imaginary part.
  CHECK(std::abs(s.eigenvalues[0] - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(s.eigenvalues[1]) < 1e-15);
  CHECK(s.width(0) == doctest::Approx(2.0));
  CHECK(std::abs(s.width(1)) < 1e-15);
}

TEST_CASE("overlapping two-level system against the closed form") {
  const auto h = two_level(0.5, 1.9);
  const auto s = eigensolve_biorthogonal(h);
  const auto [lo, hi] = oracle::eig2(0.0, 0.5, 0.5, Complex(0.0, -1.9));
  CHECK(std::abs(s.eigenvalues[0] - lo) < 1e-12);
  CHECK(std::abs(s.eigenvalues[1] - hi) < 1e-12);
  CHECK(s.a_norms[0] > 1.0);
  CHECK(s.a_norms[1] > 1.0);
  // Trace: sum of widths is twice the imaginary diagonal entry.
  CHECK(s.width(0) + s.width(1) == doctest::Approx(3.8).epsilon(1e-12));
  for (double r : width_sum_rule_check(s)) CHECK(r < 1e-10 * 1.9);
  // Off-diagonal Hermitian overlap is purely imaginary and antisymmetric.
  const Complex b01 = s.hermitian_overlaps(0, 1), b10 = s.hermitian_overlaps(1, 0);
  CHECK(std::abs(b01.real()) < 1e-10);
  CHECK(std::abs(b01 + b10) < 1e-10);
  CHECK(s.b_overlaps(0, 1) == doctest::Approx(std::abs(b01)));
}

TEST_CASE("exceptional point is reported as near-defective") {
  CHECK(kind_of([] { eigensolve_biorthogonal(two_level(0.5, 1.0)); }) == ErrorKind::NearDefective);
  const auto d = decompose(two_level(0.5, 1.0).assemble());
  CHECK(d.self_overlaps[0] < 1e-6);
}

TEST_CASE("sign convention: dominant component has positive real part") {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = eigensolve_biorthogonal(random_hamiltonian(gen, 4, 2, 0.3));
    for (const auto& x : s.eigenvectors) {
      Eigen::Index top = 0;
      x.cwiseAbs().maxCoeff(&top);
      CHECK(x[top].real() > 0.0);
    }
  }
}

TEST_CASE("isolated regime recovers A = 1") {
  RealMatrix h0 = RealMatrix::Zero(3, 3);
  h0.diagonal() << 0, 10, 20;
  RealVector v(3);
  v << 0.3, -0.5, 0.8;
  const auto s = eigensolve_biorthogonal(EffectiveHamiltonian(h0, {v}, 1e-4));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(s.a_norms[k] - 1.0) < 1e-6);
    const double partial = std::norm(s.gammas(k, 0));
    CHECK(std::abs(s.width(k) - partial) < 1e-6 * partial);
  }
}

TEST_CASE("basis expansion") {
  SUBCASE("closed system") {
    RealMatrix h0(3, 3);
    h0 << 2, 0.1, 0, 0.1, -1, 0.3, 0, 0.3, 0.5;
    const auto s = eigensolve_biorthogonal(EffectiveHamiltonian(h0, {RealVector::Ones(3)}, 0.0));
    const auto t = expand_in_basis(s, h0);
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        CHECK(std::abs(std::abs(t.coefficients(k, l)) - (k == l ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
  SUBCASE("rank-one example mixes equally") {
    const auto h = EffectiveHamiltonian(RealMatrix::Zero(2, 2), {RealVector::Ones(2)}, 1.0);
    const auto s = eigensolve_biorthogonal(h);
    // h0 = 0: any orthonormal basis diagonalizes it, so use the eigenbasis of
    // a split h0 with the same vectors, diag(1, -1) in the e1, e2 frame.
    RealMatrix split(2, 2);
    split << 1, 0, 0, -1;
    const auto t = expand_in_basis(s, split);
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) CHECK(std::abs(t.coefficients(k, l)) == doctest::Approx(M_SQRT1_2));
    }
  }
  SUBCASE("random systems reconstruct and stay bi-orthonormal") {
    oracle::Gen gen(123);
    for (int trial = 0; trial < 200; ++trial) {
      const auto h = random_hamiltonian(gen, gen.index(2, 8), gen.index(1, 3), gen.log_uniform(1e-2, 10));
      const auto s = eigensolve_biorthogonal(h);
      const auto t = expand_in_basis(s, h.h0());
      const auto n = static_cast<Eigen::Index>(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) {
        REQUIRE((t.reconstruct(k) - s.eigenvectors[k]).norm() < 1e-10);
      }
      const ComplexMatrix gram = t.coefficients * t.coefficients.transpose();
      REQUIRE((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CHECK(kind_of([] {
          const auto s = eigensolve_biorthogonal(two_level(0.5, 0.2));
          expand_in_basis(s, RealMatrix::Identity(3, 3));
        }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("property: spectroscopic identities on random Hamiltonians") {
  oracle::Gen gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen.index(2, 8), c = gen.index(1, 3);
    const auto h = random_hamiltonian(gen, n, c, gen.log_uniform(1e-3, 30));
    const auto s = eigensolve_biorthogonal(h);
    REQUIRE(biorthogonality_residual(s) < 1e-10);
    double max_width = 0.0, sum_width = 0.0;
    Complex sum_values = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      max_width = std::max(max_width, s.width(k));
      sum_width += s.width(k);
      sum_values += s.eigenvalues[k];
      REQUIRE(s.a_norms[k] >= 1.0 - 1e-10);
      REQUIRE(s.width(k) >= -1e-10);
      REQUIRE(s.width(k) <= s.gammas.row(k).squaredNorm() + 1e-10);
    }
    for (double r : width_sum_rule_check(s)) REQUIRE(r < 1e-10 * max_width);
    REQUIRE(std::abs(sum_width - h.total_width()) <= 1e-10 * h.total_width());
    const Complex trace = h.assemble().trace();
    REQUIRE(std::abs(sum_values - trace) <= 1e-10 * std::max(1.0, std::abs(trace)));
    for (std::size_t k = 1; k < n; ++k) {
      const auto a = s.eigenvalues[k - 1], b = s.eigenvalues[k];
      REQUIRE((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("property: two-level overlaps are imaginary and antisymmetric") {
  oracle::Gen gen(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto h = random_hamiltonian(gen, 2, gen.index(1, 3), gen.log_uniform(1e-2, 10));
    const auto s = eigensolve_biorthogonal(h);
    const Complex b01 = s.hermitian_overlaps(0, 1), b10 = s.hermitian_overlaps(1, 0);
    REQUIRE(std::abs(b01.real()) < 1e-10);
    REQUIRE(std::abs(b01 + b10) < 1e-10);
  }
}

TEST_CASE("property: two-level eigenvalues match the quadratic roots") {
  oracle::Gen gen(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto h = random_hamiltonian(gen, 2, gen.index(1, 3), gen.log_uniform(1e-3, 10));
    const ComplexMatrix m = h.assemble();
    const auto [lo, hi] = oracle::eig2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    const auto values = eigenvalues(m);
    REQUIRE(std::abs(values[0] - lo) < 1e-12);
    REQUIRE(std::abs(values[1] - hi) < 1e-12);
  }
}

TEST_CASE("degenerate eigenspaces get a bi-orthonormal basis") {
  RealMatrix h0 = RealMatrix::Zero(4, 4);
  RealVector v(4);
  v << 1, 2, -1, 0.5;
  const auto s = eigensolve_biorthogonal(EffectiveHamiltonian(h0, {v}, 1.0));
  CHECK(biorthogonality_residual(s) < 1e-10);
  CHECK(s.width(0) == doctest::Approx(v.squaredNorm()));
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(s.eigenvalues[k]) < 1e-12);
}

namespace {

EffectiveHamiltonian linear_family(double a, double b, double energy) {
  RealMatrix h0(2, 2);
  h0 << a + b * energy, 0, 0, a + b * energy + 100.0;
  RealVector v(2);
  v << 1, 0;
  return EffectiveHamiltonian(h0, {v}, 0.01);
}

}  // namespace

TEST_CASE("fixed point: energy-independent family") {
  RealMatrix h0(2, 2);
  h0 << 1.0, 0.2, 0.2, 3.0;
  const EffectiveHamiltonian h(h0, {RealVector::Ones(2)}, 0.4);
  const auto expected = eigensolve_biorthogonal(h);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto r = fixed_point_solve([&](double) { return h; }, k, 0.0);
    CHECK(std::abs(r.energy - expected.energy(k)) < 1e-9);
    CHECK(r.width == doctest::Approx(expected.width(k)).epsilon(1e-12));
  }
  // Starting on the solution needs no update at all.
  const auto r = fixed_point_solve([&](double) { return h; }, 0, expected.energy(0));
  CHECK(r.iterations == 0);
}

TEST_CASE("fixed point: linear family converges to a / (1 - b)") {
  for (double b : {0.5, 0.0, -0.5, 0.9}) {
    const double a = 1.2;
    const auto r = fixed_point_solve([&](double e) { return linear_family(a, b, e); }, 0, 0.0);
    CHECK(std::abs(r.energy - a / (1.0 - b)) < 1e-8);
  }
}

TEST_CASE("fixed point: expanding family does not converge") {
  for (double b : {1.0, 1.5, 3.0}) {
    CHECK(kind_of([&] {
            fixed_point_solve([&](double e) { return linear_family(1.0, b, e); }, 0, 0.0);
          }) == ErrorKind::NonConvergence);
  }
}

TEST_CASE("fixed point: bad arguments") {
  const auto h = two_level(0.5, 0.2);
  CHECK(kind_of([&] { fixed_point_solve([&](double) { return h; }, 5, 0.0); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { fixed_point_solve([&](double) { return h; }, 0, 0.0, {0.0, 1e-10, 10}); }) ==
        ErrorKind::InvalidArgument);
}
