// Tests for constraint subspaces, canonical states, and concentration
// statistics. Cross-checks use the dense projector route, which the
// library itself never takes.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "qtherm/typicality.hpp"
#include "test_util.hpp"

using namespace qtherm;
using test_util::max_abs_diff;
using Catch::Approx;

namespace {

SpaceLayout two_qubits() { return SpaceLayout({{"S", 2}, {"E", 2}}); }

// Dense reference: canonical state via the explicit projector V V^dag.
Eigen::MatrixXcd dense_canonical(const ConstraintSubspace& sub,
                                 const std::vector<std::string>& keep) {
  const Eigen::MatrixXcd proj =
      sub.isometry() * sub.isometry().adjoint() / double(sub.subspace_dim());
  const DensityMatrix mixed(proj, sub.layout());
  return partial_trace(mixed, keep).matrix();
}

// Orthonormal columns from a Ginibre draw.
Eigen::MatrixXcd rand_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = test_util::rand_cplx_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return Eigen::MatrixXcd(qr.householderQ()).leftCols(cols);
}

}  // namespace

TEST_CASE("constraint subspaces validate their isometry") {
  const auto layout = two_qubits();
  REQUIRE_THROWS_AS(ConstraintSubspace(Eigen::MatrixXcd::Ones(4, 2), layout, "bad"),
                    ValidationError);
  REQUIRE_THROWS_AS(ConstraintSubspace(Eigen::MatrixXcd::Identity(3, 3), layout, "bad"),
                    ValidationError);
  REQUIRE_THROWS_AS(
      ConstraintSubspace(Eigen::MatrixXcd::Identity(4, 0), layout, "bad"), ValidationError);

  const auto full = full_space_subspace(layout);
  REQUIRE(full.subspace_dim() == 4);
  REQUIRE(full.ambient_dim() == 4);
  REQUIRE(full.spans_full_space_trivially());
}

TEST_CASE("energy windows select the expected eigenspaces") {
  // Diagonal two-qubit operator with spectrum (-2, 0, 0, 2).
  const auto layout = two_qubits();
  Eigen::VectorXd diag(4);
  diag << -2.0, 0.0, 0.0, 2.0;
  const HermitianOperator h(diag.asDiagonal().toDenseMatrix().cast<std::complex<double>>(),
                            layout);

  const auto middle = energy_window_subspace(h, 0.0, 0.5);
  REQUIRE(middle.subspace_dim() == 2);
  // Compare projectors, not columns: the degenerate pair is only defined up
  // to a rotation.
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(1, 1) = 1.0;
  expected(2, 2) = 1.0;
  REQUIRE(max_abs_diff(middle.isometry() * middle.isometry().adjoint(), expected) < 1e-12);

  const auto top = energy_window_subspace(h, 2.0, 0.1);
  REQUIRE(top.subspace_dim() == 1);
  REQUIRE(std::norm(top.isometry()(3, 0)) == Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_WITH(energy_window_subspace(h, 5.0, 0.5),
                      Catch::Matchers::ContainsSubstring("nearest eigenvalue"));
  REQUIRE_THROWS_AS(energy_window_subspace(h, 0.0, -1.0), ValidationError);
}

TEST_CASE("canonical state of the full space is maximally mixed") {
  const auto layout = two_qubits();
  const auto omega = canonical_state(full_space_subspace(layout), {"S"});
  REQUIRE(max_abs_diff(omega.matrix(), 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
  REQUIRE(omega.layout().factor(0).label == "S");
}

TEST_CASE("canonical state of the central window is maximally mixed") {
  const auto layout = two_qubits();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 2);
  v(1, 0) = 1.0;
  v(2, 1) = 1.0;
  const ConstraintSubspace sub(v, layout, "central window");
  const auto omega = canonical_state(sub, {"S"});
  REQUIRE(max_abs_diff(omega.matrix(), 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
}

TEST_CASE("one-dimensional product subspace reduces to a projector") {
  const auto layout = two_qubits();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 1);
  v(1, 0) = 1.0;  // |0>|1>
  const auto omega = canonical_state(ConstraintSubspace(v, layout, "point"), {"S"});
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
  expected(0, 0) = 1.0;
  REQUIRE(max_abs_diff(omega.matrix(), expected) < 1e-14);
}

TEST_CASE("column accumulation agrees with the dense projector route") {
  std::mt19937_64 rng(13);
  const SpaceLayout layout({{"A", 2}, {"B", 3}, {"C", 2}});
  for (Eigen::Index dr : {1, 3, 7, 12}) {
    const ConstraintSubspace sub(rand_isometry(12, dr, rng), layout, "random");
    for (const auto& keep :
         std::vector<std::vector<std::string>>{{"A"}, {"B"}, {"A", "C"}}) {
      REQUIRE(max_abs_diff(canonical_state(sub, keep).matrix(), dense_canonical(sub, keep)) <
              1e-12);
    }
  }
}

TEST_CASE("permuted identity spans the full space through the generic path") {
  const auto layout = two_qubits();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
  v(0, 3) = 1.0;
  v(1, 0) = 1.0;
  v(2, 1) = 1.0;
  v(3, 2) = 1.0;
  const ConstraintSubspace sub(v, layout, "permuted");
  REQUIRE_FALSE(sub.spans_full_space_trivially());
  REQUIRE(max_abs_diff(canonical_state(sub, {"E"}).matrix(),
                       0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
}

TEST_CASE("haar states stay inside their subspace") {
  std::mt19937_64 rng(23);
  const SpaceLayout layout({{"A", 4}, {"B", 4}});
  const ConstraintSubspace sub(rand_isometry(16, 5, rng), layout, "random");
  for (int i = 0; i < 10; ++i) {
    const auto psi = haar_state_in_subspace(sub, derive_stream(SeedSpec{50, 0}, i));
    const Eigen::VectorXcd projected =
        sub.isometry() * (sub.isometry().adjoint() * psi.amplitudes());
    REQUIRE((projected - psi.amplitudes()).norm() < 1e-10);
    REQUIRE(psi.amplitudes().norm() == Approx(1.0).margin(1e-12));
  }

  const auto a = haar_state_in_subspace(sub, SeedSpec{50, 7});
  const auto b = haar_state_in_subspace(sub, SeedSpec{50, 7});
  REQUIRE(a.amplitudes() == b.amplitudes());
}

TEST_CASE("subspace samples average to the maximally mixed state on R") {
  std::mt19937_64 rng(33);
  const SpaceLayout layout({{"A", 2}, {"B", 4}});
  const ConstraintSubspace sub(rand_isometry(8, 4, rng), layout, "random");
  const int n = 2000;
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < n; ++i) {
    const auto psi = haar_state_in_subspace(sub, derive_stream(SeedSpec{60, 0}, i));
    const Eigen::VectorXcd coeffs = sub.isometry().adjoint() * psi.amplitudes();
    mean += coeffs * coeffs.adjoint();
  }
  mean /= double(n);
  REQUIRE(max_abs_diff(mean, 0.25 * Eigen::MatrixXcd::Identity(4, 4)) < 0.025);
}

TEST_CASE("sweep over a one-dimensional subspace has zero spread") {
  const auto layout = two_qubits();

  Eigen::MatrixXcd point = Eigen::MatrixXcd::Zero(4, 1);
  point(2, 0) = 1.0;  // |1>|0>
  const auto stats =
      typicality_sweep(ConstraintSubspace(point, layout, "point"), {"S"}, 50, SeedSpec{70, 0});
  REQUIRE(stats.sample_count == 50);
  REQUIRE(stats.mean_distance < 1e-12);
  REQUIRE(stats.max_distance < 1e-12);
  REQUIRE(stats.std_distance < 1e-12);
  REQUIRE(stats.mean_entropy < 1e-9);

  // A Bell-spanned line: every sample reduces to I/2 and the entropy is a
  // full bit.
  Eigen::MatrixXcd bell = Eigen::MatrixXcd::Zero(4, 1);
  bell(0, 0) = 1.0 / std::sqrt(2.0);
  bell(3, 0) = 1.0 / std::sqrt(2.0);
  const auto bstats =
      typicality_sweep(ConstraintSubspace(bell, layout, "bell"), {"S"}, 20, SeedSpec{70, 1});
  REQUIRE(bstats.mean_distance < 1e-12);
  REQUIRE(bstats.mean_entropy == Approx(std::log(2.0)).margin(1e-9));
}

TEST_CASE("sweep statistics are bit-identical across worker counts") {
  const SpaceLayout layout({{"S", 2}, {"E", 8}});
  const auto sub = full_space_subspace(layout);
  const auto s1 = typicality_sweep(sub, {"S"}, 64, SeedSpec{80, 0}, 1);
  const auto s3 = typicality_sweep(sub, {"S"}, 64, SeedSpec{80, 0}, 3);
  const auto s8 = typicality_sweep(sub, {"S"}, 64, SeedSpec{80, 0}, 8);
  REQUIRE(s1.mean_distance == s3.mean_distance);
  REQUIRE(s1.mean_distance == s8.mean_distance);
  REQUIRE(s1.max_distance == s3.max_distance);
  REQUIRE(s1.std_distance == s3.std_distance);
  REQUIRE(s1.mean_entropy == s3.mean_entropy);
  REQUIRE(s1.env_dim == 8);
  REQUIRE(s1.sys_dim == 2);
}

TEST_CASE("distance to the canonical state shrinks with environment size") {
  std::vector<double> means;
  for (Eigen::Index env : {4, 16, 64}) {
    const SpaceLayout layout({{"S", 2}, {"E", env}});
    const auto stats =
        typicality_sweep(full_space_subspace(layout), {"S"}, 200, SeedSpec{90, 0}, 2);
    means.push_back(stats.mean_distance);
  }
  REQUIRE(means[1] < means[0]);
  REQUIRE(means[2] < means[1]);
  REQUIRE(means[2] < 0.5 * means[0]);
}

TEST_CASE("small bipartite sweep lands in the expected band") {
  const SpaceLayout layout({{"S", 2}, {"E", 2}});
  const auto stats =
      typicality_sweep(full_space_subspace(layout), {"S"}, 1000, SeedSpec{100, 0}, 2);
  REQUIRE(stats.mean_distance > 0.1);
  REQUIRE(stats.mean_distance < 0.6);
  REQUIRE(stats.mean_entropy > 0.2);
  REQUIRE(stats.mean_entropy < std::log(2.0));
}
