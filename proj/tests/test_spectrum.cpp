#include <doctest.h>

#include <cmath>
#include <random>

#include "acspec/spectrum.hpp"
#include "oracles.hpp"

using namespace acspec;

TEST_CASE("eigenvalues of small explicit matrices") {
  Eigen::MatrixXd D = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  const Eigen::VectorXd lam = hermitian_eigenvalues(D);
  CHECK(lam(0) == doctest::Approx(1.0));
  CHECK(lam(1) == doctest::Approx(2.0));
  CHECK(lam(2) == doctest::Approx(3.0));

  Eigen::MatrixXd F(2, 2);
  F << 0.0, 1.0, 1.0, 0.0;
  const Eigen::VectorXd lf = hermitian_eigenvalues(F);
  CHECK(lf(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(lf(1) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 1.0, 1.0, std::nan("");
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("random Hermitian eigenvalues match the characteristic polynomial roots") {
  std::mt19937_64 eng(42);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd A(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) A(i, j) = Complex(d(eng), d(eng));
    const Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
    const Eigen::VectorXd lam = hermitian_eigenvalues(H);
    const std::vector<double> roots = oracle::charpoly_eigenvalues(H);
    REQUIRE(roots.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(lam[i] - roots[static_cast<std::size_t>(i)]) < 1e-10);
    CHECK(std::abs(lam.sum() - H.trace().real()) <=
          1e-8 * 5 * std::max(1.0, lam.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("eigenpair residuals stay within the backward-stability budget") {
  std::mt19937_64 eng(7);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd A(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) A(i, j) = d(eng);
  const Eigen::MatrixXd H = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const double scale = H.operatorNorm();
  for (int k : {0, 7, 19}) {
    const Eigen::VectorXd v = es.eigenvectors().col(k);
    CHECK((H * v - es.eigenvalues()[k] * v).norm() <= 1e-8 * scale);
  }
}

TEST_CASE("empirical Stieltjes transform values") {
  Eigen::VectorXd two(2);
  two << -1.0, 1.0;
  CHECK(std::abs(empirical_stieltjes(two, Complex(0, 1)) - Complex(0, 0.5)) < 1e-15);

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(5);
  CHECK(std::abs(empirical_stieltjes(zeros, Complex(0, 1)) - Complex(0, 1)) < 1e-15);

  CHECK_THROWS_AS(empirical_stieltjes(two, Complex(0, -1)), std::invalid_argument);
  CHECK_THROWS_AS(empirical_stieltjes(two, Complex(1, 0)), std::invalid_argument);
}

TEST_CASE("empirical Stieltjes transform maps C+ to C+ and has unit mass") {
  std::mt19937_64 eng(8);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd spec(40);
  for (int i = 0; i < 40; ++i) spec[i] = 3.0 * d(eng);
  std::uniform_real_distribution<double> ux(-5.0, 5.0), uy(1e-3, 10.0);
  for (int k = 0; k < 100; ++k) {
    const Complex z(ux(eng), uy(eng));
    CHECK(empirical_stieltjes(spec, z).imag() > 0.0);
  }
  const double lmax = spec.cwiseAbs().maxCoeff();
  for (double v : {50.0, 100.0, 200.0}) {
    const Complex z(0.0, v);
    const Complex iv_s = z * empirical_stieltjes(spec, z);
    CHECK(std::abs(iv_s + 1.0) <= 2.0 * (lmax / v) * (lmax / v));
  }
}

TEST_CASE("KS distance basics") {
  Eigen::VectorXd a(3), b(3);
  a << 0.0, 0.5, 1.0;
  b << 0.0, 0.5, 1.0;
  CHECK(ks_distance(a, b) == 0.0);

  Eigen::VectorXd s0(1), s1(1);
  s0 << 0.0;
  s1 << 1.0;
  CHECK(ks_distance(s0, s1) == 1.0);

  Eigen::VectorXd two(2);
  two << 0.0, 1.0;
  CHECK(ks_distance(two, s0) == doctest::Approx(0.5));
}

TEST_CASE("KS distance behaves like a metric on random spectra") {
  std::mt19937_64 eng(9);
  std::normal_distribution<double> d(0.0, 1.0);
  auto draw = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = d(eng);
    return v;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd x = draw(17), y = draw(23), z = draw(11);
    CHECK(ks_distance(x, x) == 0.0);
    CHECK(ks_distance(x, y) == doctest::Approx(ks_distance(y, x)));
    CHECK(ks_distance(x, z) <= ks_distance(x, y) + ks_distance(y, z) + 1e-15);
    CHECK(ks_distance(x, y) >= 0.0);
    CHECK(ks_distance(x, y) <= 1.0);
  }
}

TEST_CASE("KS distance against a reference CDF") {
  Eigen::VectorXd spec(4);
  spec << -1.0, -0.5, 0.5, 1.0;
  const auto cdf = [](double t) { return std::clamp(0.5 * (t + 1.0), 0.0, 1.0); };
  // Hand-computed sup over jump points: max gap at t = -0.5- (0.25 vs 1/4)...
  double expect = 0.0;
  const double n = 4.0;
  for (int i = 0; i < 4; ++i) {
    expect = std::max(expect, std::abs((i + 1) / n - cdf(spec[i])));
    expect = std::max(expect, std::abs(i / n - cdf(spec[i])));
  }
  CHECK(ks_distance(spec, cdf) == doctest::Approx(expect));
}

TEST_CASE("spectrum second moment equals the Frobenius mean square") {
  std::mt19937_64 eng(10);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd A(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) A(i, j) = d(eng);
  const Eigen::MatrixXd H = 0.5 * (A + A.transpose());
  const Eigen::VectorXd lam = hermitian_eigenvalues(H);
  CHECK(lam.squaredNorm() / 12.0 ==
        doctest::Approx(H.squaredNorm() / 12.0).epsilon(1e-12));
}
