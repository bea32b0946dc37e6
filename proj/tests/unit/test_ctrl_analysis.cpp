#include <algorithm>

#include <gtest/gtest.h>

#include "lcc/ctrl_analysis.hpp"
#include "lcc/errors.hpp"
#include "lcc/scenarios.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

const LinearCoeffs kC = default_coeffs();

// Sort complex numbers for set comparison.
std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
  std::sort(v.begin(), v.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

}  // namespace

TEST(Condition, Values) {
  EXPECT_NEAR(condition_check(kC), 0.4024778, 1e-6);
  EXPECT_DOUBLE_EQ(condition_check(LinearCoeffs(1.0, 2.0, 1.0)), 0.0);
  const double a2 = 1.7, a3 = 0.6;
  EXPECT_NEAR(condition_check(LinearCoeffs(a2 * a3 - a3 * a3, a2, a3)), 0.0, 1e-15);
}

TEST(Controllability, FreeDrivingChain) {
  const auto r = analyze_controllability(build_system(SystemVariant::FD_LCC, 0, 2, kC));
  EXPECT_TRUE(r.controllable);
  EXPECT_TRUE(r.pbh_controllable);
  EXPECT_EQ(r.controllable_dim, 6);
  EXPECT_NEAR(*r.condition_value, 0.4025, 1e-3);
  EXPECT_TRUE(r.uncontrollable_mode_eigenvalues.empty());
}

TEST(Controllability, ZeroConditionBreaksFreeDriving) {
  // alpha1 = alpha2 alpha3 - alpha3^2 makes phi share a root with gamma.
  const LinearCoeffs c(1.7 * 0.6 - 0.36, 1.7, 0.6);
  const auto r = analyze_controllability(build_system(SystemVariant::FD_LCC, 0, 2, c));
  EXPECT_FALSE(r.controllable);
  EXPECT_FALSE(r.pbh_controllable);
  EXPECT_LT(r.controllable_dim, 6);
}

TEST(Controllability, GeneralLccUncontrollableAhead) {
  const auto model = build_system(SystemVariant::GeneralLCC, 1, 1, kC);
  const auto r = analyze_controllability(model);
  EXPECT_FALSE(r.controllable);
  EXPECT_EQ(r.controllable_dim, 4);
  ASSERT_EQ(r.uncontrollable_mode_eigenvalues.size(), 2u);
  Eigen::EigenSolver<Eigen::Matrix2d> es(model.A.block<2, 2>(0, 0));
  const auto expected =
      sorted({es.eigenvalues()(0), es.eigenvalues()(1)});
  const auto got = sorted(r.uncontrollable_mode_eigenvalues);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(std::abs(got[i] - expected[i]), 1e-9);
  ASSERT_EQ(r.pbh_deficient_eigenvalues.size(), 2u);
}

TEST(Controllability, CccOnlyOwnState) {
  const auto r = analyze_controllability(build_system(SystemVariant::CCC, 2, 0, kC));
  EXPECT_EQ(r.controllable_dim, 2);
  EXPECT_EQ(r.uncontrollable_mode_eigenvalues.size(), 4u);
}

TEST(Controllability, ScalarAndDiagonalCases) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Ones(1, 1);
  EXPECT_TRUE(pbh_controllability(A, B).controllable);
  // Repeated eigenvalue with one input: never controllable.
  Eigen::MatrixXd D = -Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd b(2, 1);
  b << 1, 1;
  const auto r = pbh_controllability(D, b);
  EXPECT_FALSE(r.controllable);
  EXPECT_EQ(r.controllable_dim, 1);
  ASSERT_EQ(r.uncontrollable_mode_eigenvalues.size(), 1u);
  EXPECT_NEAR(r.uncontrollable_mode_eigenvalues[0].real(), -1.0, 1e-12);
  EXPECT_THROW(pbh_controllability(D, Eigen::MatrixXd::Ones(3, 1)), DomainError);
}

TEST(OutputMatrix, Layouts) {
  const auto fd = build_system(SystemVariant::FD_LCC, 0, 2, kC);
  const Eigen::MatrixXd C = build_output_matrix(fd, 1);
  ASSERT_EQ(C.rows(), 1);
  EXPECT_EQ(C(0, 3), 1.0);
  EXPECT_EQ(C.sum(), 1.0);

  const auto g = build_system(SystemVariant::GeneralLCC, 1, 1, kC);
  const Eigen::MatrixXd Cg = build_output_matrix(g, 1);
  ASSERT_EQ(Cg.rows(), 3);
  // rows e_3, e_4, e_6 in one-based numbering
  EXPECT_EQ(Cg(0, 2), 1.0);
  EXPECT_EQ(Cg(1, 3), 1.0);
  EXPECT_EQ(Cg(2, 5), 1.0);
  EXPECT_EQ(Cg.sum(), 3.0);
  EXPECT_THROW(build_output_matrix(g, 2), TopologyError);
  EXPECT_THROW(build_output_matrix(g, 0), TopologyError);
}

TEST(Observability, FreeDrivingMeasuringMiddle) {
  const auto fd = build_system(SystemVariant::FD_LCC, 0, 3, kC);
  const auto r = analyze_observability(fd, build_output_matrix(fd, 2));
  EXPECT_FALSE(r.observable);
  // vehicles 1..2 observable (4 states) plus the CAV velocity; -p0 never is
  EXPECT_EQ(r.observable_dim, 5);
  EXPECT_EQ(r.unobservable_vehicle_ids, (std::vector<int>{0, 3}));
  EXPECT_EQ(r.unobservable_basis.cols(), 3);
}

TEST(Observability, FreeDrivingMeasuringTail) {
  const auto fd = build_system(SystemVariant::FD_LCC, 0, 3, kC);
  const auto r = analyze_observability(fd, build_output_matrix(fd, 3));
  EXPECT_EQ(r.unobservable_vehicle_ids, (std::vector<int>{0}));
}

TEST(Observability, GeneralAndCcc) {
  const auto g = build_system(SystemVariant::GeneralLCC, 2, 2, kC);
  EXPECT_TRUE(analyze_observability(g, build_output_matrix(g, 2)).observable);
  const auto partial = analyze_observability(g, build_output_matrix(g, 1));
  EXPECT_EQ(partial.observable_dim, 2 * 2 + 2 + 2);
  EXPECT_EQ(partial.unobservable_vehicle_ids, (std::vector<int>{2}));
  const auto ccc = build_system(SystemVariant::CCC, 3, 0, kC);
  EXPECT_TRUE(analyze_observability(ccc, own_state_output_matrix(ccc)).observable);
}

TEST(Gramian, ScalarIntegrator) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Ones(1, 1);
  const auto g = gramian(A, B, 10.0);
  EXPECT_NEAR(g.W(0, 0), 10.0, 1e-12);
  EXPECT_NEAR(*g.trace_inv, 0.1, 1e-12);
  const auto tiny = gramian(A, B, 1e-9);
  EXPECT_NEAR(tiny.W(0, 0), 0.0, 1e-8);
  EXPECT_THROW(gramian(A, B, 0.0), DomainError);
  EXPECT_THROW(gramian(A, B, 1.0, 0.0), DomainError);
}

TEST(Gramian, MatchesSimpsonQuadrature) {
  const auto fd = build_system(SystemVariant::FD_LCC, 0, 1, kC);
  const auto g = gramian(fd.A, fd.B, 10.0);
  const Eigen::MatrixXd ref = oracle::simpson_gramian(fd.A, fd.B, 10.0, 10000);
  EXPECT_LT((g.W - ref).norm() / ref.norm(), 1e-6);
  EXPECT_LT((g.W - g.W.transpose()).norm(), 1e-10);
}

TEST(Gramian, SingularMarker) {
  const auto g = build_system(SystemVariant::GeneralLCC, 1, 1, kC);
  const auto r = gramian(g.A, g.B, 10.0);
  EXPECT_TRUE(r.singular());
  EXPECT_FALSE(r.trace_inv.has_value());
}

TEST(MinEnergy, AnalyticCases) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd x1 = Eigen::VectorXd::Ones(1);
  EXPECT_NEAR(min_energy(A, B, 1.0, x0, x1), 1.0, 1e-12);

  const auto fd = build_system(SystemVariant::FD_LCC, 0, 2, kC);
  Eigen::VectorXd start(6);
  start << 1, -0.5, 2, 0.3, -1, 0.1;
  const Eigen::VectorXd drift = oracle::expm_taylor(fd.A, 5.0) * start;
  EXPECT_NEAR(min_energy(fd.A, fd.B, 5.0, start, drift), 0.0, 1e-10);
  const Eigen::VectorXd target = Eigen::VectorXd::Ones(6);
  const double e1 = min_energy(fd.A, fd.B, 5.0, start, target);
  const double e2 = min_energy(fd.A, fd.B, 5.0, start, drift + 2.0 * (target - drift));
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(e2 / e1, 4.0, 1e-6);
}

TEST(MinEnergy, SingularGramianThrows) {
  const auto g = build_system(SystemVariant::GeneralLCC, 1, 1, kC);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(6);
  try {
    min_energy(g.A, g.B, 10.0, x, 2.0 * x);
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_LT(e.lambda_min(), 1e-6);
  }
}

TEST(EnergyStudy, RowsOrderedAndTrending) {
  const auto rows = energy_scaling_study(SystemVariant::FD_LCC, {3, 1, 2}, {20.0, 10.0}, kC);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].n, 1);
  EXPECT_EQ(rows[0].t, 10.0);
  EXPECT_EQ(rows[1].t, 20.0);
  EXPECT_GT(rows[0].lambda_min, rows[2].lambda_min);
  EXPECT_GT(rows[1].lambda_min, rows[0].lambda_min);
  EXPECT_THROW(energy_scaling_study(SystemVariant::GeneralLCC, {1}, {10.0}, kC), TopologyError);
  EXPECT_THROW(energy_scaling_study(SystemVariant::FD_LCC, {}, {10.0}, kC), DomainError);
}
