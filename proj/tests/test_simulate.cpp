#include <doctest.h>

#include <cmath>
#include <numbers>

#include "acspec/model.hpp"
#include "acspec/simulate.hpp"
#include "oracles.hpp"

using namespace acspec;

namespace {

ProcessModel ma1(double a) { return make_ma(atoms_1d({a}, {1.0}), 1); }

}  // namespace

TEST_CASE("innovation laws have the advertised support and moments") {
  SUBCASE("rademacher support") {
    const auto Z = gen_innovations<double>(8, 64, 1, InnovationLaw::Rademacher, 11);
    CHECK((Z.entries.array().abs() == 1.0).all());
  }
  SUBCASE("uniform range and variance") {
    const auto Z = gen_innovations<double>(64, 4096, 0, InnovationLaw::Uniform, 12);
    const double b = std::sqrt(3.0);
    CHECK(Z.entries.minCoeff() >= -b);
    CHECK(Z.entries.maxCoeff() <= b);
    const double var = Z.entries.array().square().mean();
    CHECK(std::abs(var - 1.0) < 0.02);  // se ~ sqrt(0.8/N) ~ 0.002
  }
  SUBCASE("complex gaussian fourth moment") {
    const auto Z = gen_innovations<Complex>(512, 2048, 0, InnovationLaw::ComplexGaussian, 13);
    const double N = static_cast<double>(Z.entries.size());
    REQUIRE(N >= 1e6);
    const double m4 = Z.entries.array().abs2().square().mean();
    CHECK(std::abs(m4 - 2.0) < 3.0 * std::sqrt(20.0 / N));
    const double m2 = Z.entries.array().abs2().mean();
    CHECK(std::abs(m2 - 1.0) < 0.02);
  }
  SUBCASE("per-entry mean is small") {
    const auto Z = gen_innovations<double>(32, 1024, 2, InnovationLaw::Gaussian, 14);
    CHECK(std::abs(Z.entries.mean()) <= 5.0 / std::sqrt(static_cast<double>(Z.entries.size())));
  }
  SUBCASE("law/field mismatches are rejected") {
    CHECK_THROWS_AS(gen_innovations<double>(2, 4, 0, InnovationLaw::ComplexGaussian, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(gen_innovations<Complex>(2, 4, 0, InnovationLaw::Rademacher, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("innovations are deterministic in the seed") {
  const auto a = gen_innovations<double>(16, 128, 1, InnovationLaw::Gaussian, 99);
  const auto b = gen_innovations<double>(16, 128, 1, InnovationLaw::Gaussian, 99);
  const auto c = gen_innovations<double>(16, 128, 1, InnovationLaw::Gaussian, 100);
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.entries - c.entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("identity model reproduces the observation window") {
  const auto Z = gen_innovations<double>(4, 32, 0, InnovationLaw::Gaussian, 5);
  const Eigen::MatrixXd X = gen_process(make_identity(), Z);
  CHECK((X - Z.entries.rightCols(32)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("MA(1) convolution expands as stated") {
  InnovationBlock<double> Z;
  Z.entries.resize(1, 3);
  Z.entries << 1.0, 2.0, 3.0;  // z_0, z_1, z_2
  Z.p = 1;
  Z.n = 2;
  Z.q = 1;
  const Eigen::MatrixXd X = gen_process(ma1(0.5), Z);
  CHECK(X(0, 0) == doctest::Approx(2.0 + 0.5 * 1.0));
  CHECK(X(0, 1) == doctest::Approx(3.0 + 0.5 * 2.0));
}

TEST_CASE("MA(1) with zero coefficient collapses to identity") {
  const auto Z = gen_innovations<double>(3, 16, 1, InnovationLaw::Gaussian, 6);
  const Eigen::MatrixXd X = gen_process(ma1(0.0), Z);
  CHECK((X - Z.entries.rightCols(16)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("direct and FFT convolution agree") {
  const ProcessModel m = make_ma(atoms_1d({0.7}, {1.0}), 1);
  const auto Z = gen_innovations<double>(8, 512, 1, InnovationLaw::Gaussian, 7);
  const Eigen::MatrixXd Xd = gen_process(m, Z, ConvPath::Direct);
  const Eigen::MatrixXd Xf = gen_process(m, Z, ConvPath::Fft);
  CHECK((Xd - Xf).cwiseAbs().maxCoeff() <= 1e-10 * Xd.cwiseAbs().maxCoeff());

  ProcessModel mc = make_ma(atoms_1d({-0.4}, {1.0}), 1);
  mc.field = Field::Complex;
  mc.law = InnovationLaw::ComplexGaussian;
  const auto Zc = gen_innovations<Complex>(4, 256, 1, InnovationLaw::ComplexGaussian, 8);
  const auto Xdc = gen_process(mc, Zc, ConvPath::Direct);
  const auto Xfc = gen_process(mc, Zc, ConvPath::Fft);
  CHECK((Xdc - Xfc).cwiseAbs().maxCoeff() <= 1e-10 * Xdc.cwiseAbs().maxCoeff());
}

TEST_CASE("atom assignment follows largest-remainder apportionment") {
  const auto m = atoms_1d({0.5, -0.5}, {0.5, 0.5});
  const auto assign5 = assign_atoms(m, 5);
  CHECK(assign5 == std::vector<int>{0, 0, 0, 1, 1});

  const auto m2 = atoms_1d({0.1, 0.2, 0.3}, {0.2, 0.3, 0.5});
  const int p = 97;
  const auto assign = assign_atoms(m2, p);
  Eigen::Vector3d counts = Eigen::Vector3d::Zero();
  for (int idx : assign) counts[idx] += 1.0;
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(counts[i] / p - m2.weights[i]) <= 1.0 / p + 1e-15);
}

TEST_CASE("b modulation scales rows by sqrt(g_B)") {
  const auto Z = gen_innovations<double>(6, 32, 0, InnovationLaw::Gaussian, 9);
  const Eigen::MatrixXd X = gen_process(make_identity(), Z);

  SpectralAtomMeasure ones = single_atom(0.0, 1.0);
  CHECK((apply_b_modulation(X, ones) - X).cwiseAbs().maxCoeff() == 0.0);

  SpectralAtomMeasure four = single_atom(0.0, 4.0);
  CHECK((apply_b_modulation(X, four) - 2.0 * X).cwiseAbs().maxCoeff() < 1e-15);

  SpectralAtomMeasure mixed = atoms_1d({0.0, 1.0}, {0.5, 0.5});
  mixed.b_values = Eigen::VectorXd::Zero(2);
  mixed.b_values[1] = 2.0;
  const Eigen::MatrixXd Y = apply_b_modulation(X, mixed);
  CHECK(Y.topRows(3).cwiseAbs().maxCoeff() == 0.0);  // zero-modulated rows vanish
  CHECK(Y.bottomRows(3).cwiseAbs().maxCoeff() > 0.0);

  SpectralAtomMeasure none = single_atom(0.0);
  CHECK_THROWS_AS(apply_b_modulation(X, none), std::invalid_argument);
}

TEST_CASE("filters compose onto the model") {
  const ProcessModel base = make_identity();
  SUBCASE("identity filter changes nothing") {
    const ProcessModel f = apply_filter(base, {1.0});
    CHECK(f.effective_q() == 0);
    CHECK(coefficient(f, 0, 0) == 1.0);
  }
  SUBCASE("pure delay shifts the coefficients, power unchanged") {
    const ProcessModel f = apply_filter(base, {0.0, 1.0});
    CHECK(coefficient(f, 0, 0) == 0.0);
    CHECK(coefficient(f, 1, 0) == 1.0);
    for (int k = 0; k < 64; ++k) {
      const double nu = 2.0 * std::numbers::pi * k / 64;
      CHECK(power_psi(f, 0, nu) == doctest::Approx(power_psi(base, 0, nu)).epsilon(1e-12));
    }
  }
  SUBCASE("first difference filter has power 2 + 2 cos(nu)") {
    const ProcessModel f = apply_filter(base, {1.0, 1.0});
    for (int k = 0; k < 64; ++k) {
      const double nu = 2.0 * std::numbers::pi * k / 64;
      CHECK(power_psi(f, 0, nu) == doctest::Approx(2.0 + 2.0 * std::cos(nu)).epsilon(1e-12));
    }
  }
  SUBCASE("empty filter is rejected") {
    CHECK_THROWS_AS(apply_filter(base, {}), std::invalid_argument);
  }
  SUBCASE("filtered generation matches the convolved coefficients") {
    const ProcessModel f = apply_filter(ma1(0.5), {1.0, -0.25});
    const auto Z = gen_innovations<double>(2, 64, f.effective_q(), InnovationLaw::Gaussian, 17);
    const Eigen::MatrixXd X = gen_process(f, Z);
    // (c * f)(a=0.5): lag 0 -> 1, lag 1 -> 0.5 - 0.25, lag 2 -> -0.125
    for (int t = 0; t < 64; ++t) {
      const double want = Z.entries(0, 2 + t) + 0.25 * Z.entries(0, 1 + t) -
                          0.125 * Z.entries(0, t);
      CHECK(X(0, t) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-row MA(1) lag-1 autocovariance approaches the coefficient") {
  const double a = 0.3;
  const int n = 100000;
  const auto Z = gen_innovations<double>(1, n, 1, InnovationLaw::Gaussian, 21);
  const Eigen::MatrixXd X = gen_process(ma1(a), Z);
  double acc = 0.0;
  for (int t = 1; t < n; ++t) acc += X(0, t) * X(0, t - 1);
  acc /= (n - 1);
  CHECK(std::abs(acc - a) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("random conjugation matrices are unitary") {
  const Eigen::MatrixXd Q = haar_orthogonal(24, 42);
  CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXcd U = haar_unitary(16, 43);
  CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
  const auto Z = gen_innovations<double>(24, 64, 0, InnovationLaw::Gaussian, 44);
  const Eigen::MatrixXd X = gen_process(make_identity(), Z);
  CHECK((conjugate_by_random_unitary(X, 42) - Q * X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturbation scenarios") {
  const ProcessModel m = ma1(0.5);
  const int p = 48, n = 256;
  const auto Z = gen_innovations<double>(p, n, 1, InnovationLaw::Gaussian, 31);

  SUBCASE("zero magnitude reproduces the base process exactly") {
    const PerturbedProcess pert(m, p, n, PerturbMode::LowRank, 0.0, 77);
    CHECK((pert.generate(Z) - gen_process(m, Z)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("low-rank spikes have the constructed rank") {
    const PerturbedProcess pert(m, p, n, PerturbMode::LowRank, 1.0, 77);
    const Eigen::MatrixXd d1 = pert.delta(1);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(d1);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-10) ++rank;
    CHECK(rank == 1);
    CHECK((d1 - d1.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("small-norm deltas respect the operator norm budget") {
    const double mag = 2.0;
    const PerturbedProcess pert(m, p, n, PerturbMode::SmallNorm, mag, 78);
    const double bound = mag * std::sqrt(static_cast<double>(p) / n);
    const double nrm = oracle::power_iteration_norm(pert.delta(1));
    CHECK(nrm <= bound * (1.0 + 1e-8));
    CHECK(nrm > 0.0);
  }
}
