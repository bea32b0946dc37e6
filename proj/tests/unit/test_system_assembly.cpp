#include <gtest/gtest.h>

#include "lcc/errors.hpp"
#include "lcc/scenarios.hpp"
#include "lcc/system_assembly.hpp"

using namespace lcc;

namespace {
const LinearCoeffs kC = default_coeffs();
}

TEST(Topology, Admissibility) {
  EXPECT_NO_THROW(validate_topology(SystemVariant::GeneralLCC, 1, 1));
  EXPECT_THROW(validate_topology(SystemVariant::GeneralLCC, 0, 1), TopologyError);
  EXPECT_THROW(validate_topology(SystemVariant::GeneralLCC, 1, 0), TopologyError);
  EXPECT_NO_THROW(validate_topology(SystemVariant::FD_LCC, 0, 3));
  EXPECT_THROW(validate_topology(SystemVariant::FD_LCC, 1, 3), TopologyError);
  EXPECT_NO_THROW(validate_topology(SystemVariant::CCC, 2, 0));
  EXPECT_THROW(validate_topology(SystemVariant::CCC, 2, 1), TopologyError);
  EXPECT_EQ(parse_variant("fd"), SystemVariant::FD_LCC);
  EXPECT_EQ(parse_variant("general"), SystemVariant::GeneralLCC);
  EXPECT_THROW(parse_variant("ring"), TopologyError);
}

TEST(StateIndexMap, RowsAndSlots) {
  const StateIndexMap idx(SystemVariant::GeneralLCC, 2, 3);
  EXPECT_EQ(idx.dim(), 12);
  EXPECT_EQ(idx.spacing_row(-2), 0);
  EXPECT_EQ(idx.velocity_row(-2), 1);
  EXPECT_EQ(idx.spacing_row(0), 4);
  EXPECT_EQ(idx.velocity_row(3), 11);
  for (int r = 0; r < idx.dim(); ++r) EXPECT_EQ(idx.row(idx.slot(r)), r);
  EXPECT_THROW(idx.spacing_row(4), TopologyError);

  const StateIndexMap fd(SystemVariant::FD_LCC, 0, 2);
  EXPECT_EQ(fd.slot(0).kind, StateKind::NegatedPosition);
  EXPECT_EQ(fd.slot(2).kind, StateKind::Spacing);
}

TEST(BuildSystem, GeneralBlocks) {
  const StateSpaceModel s = build_system(SystemVariant::GeneralLCC, 1, 1, kC);
  ASSERT_EQ(s.dim(), 6);
  Eigen::MatrixXd A(6, 6);
  const double a1 = kC.alpha1(), a2 = kC.alpha2(), a3 = kC.alpha3();
  A << 0, -1, 0, 0, 0, 0,
       a1, -a2, 0, 0, 0, 0,
       0, 1, 0, -1, 0, 0,
       0, 0, 0, 0, 0, 0,
       0, 0, 0, 1, 0, -1,
       0, 0, 0, a3, a1, -a2;
  EXPECT_TRUE(s.A.isApprox(A, 1e-15));
  Eigen::VectorXd B = Eigen::VectorXd::Zero(6);
  B(3) = 1;
  EXPECT_EQ(s.B, B);
  ASSERT_TRUE(s.H.has_value());
  Eigen::VectorXd H = Eigen::VectorXd::Zero(6);
  H(0) = 1;
  H(1) = a3;
  EXPECT_EQ(*s.H, H);
}

TEST(BuildSystem, FreeDrivingAndCarFollowing) {
  const StateSpaceModel fd = build_system(SystemVariant::FD_LCC, 0, 1, kC);
  EXPECT_FALSE(fd.H.has_value());
  EXPECT_EQ(fd.A(0, 1), -1.0);
  EXPECT_EQ(fd.A(1, 0), 0.0);
  EXPECT_EQ(fd.A(1, 1), 0.0);

  const StateSpaceModel cf = build_system(SystemVariant::CF_LCC, 0, 1, kC);
  ASSERT_TRUE(cf.H.has_value());
  EXPECT_EQ(cf.A(1, 0), kC.alpha1());
  EXPECT_EQ(cf.A(1, 1), -kC.alpha2());
  EXPECT_EQ(cf.B(1), 1.0);
}

TEST(FeedbackRow, BaselinePlusGains) {
  const StateSpaceModel s = build_system(SystemVariant::GeneralLCC, 2, 2, kC);
  const FeedbackGains g = table1_gains("D");
  const Eigen::RowVectorXd K = feedback_row(s, g);
  const auto& idx = s.index;
  EXPECT_DOUBLE_EQ(K(idx.spacing_row(0)), kC.alpha1());
  EXPECT_DOUBLE_EQ(K(idx.velocity_row(0)), -kC.alpha2());
  EXPECT_DOUBLE_EQ(K(idx.velocity_row(-1)), kC.alpha3() - 1.0);
  EXPECT_DOUBLE_EQ(K(idx.spacing_row(-1)), 1.0);
  EXPECT_DOUBLE_EQ(K(idx.spacing_row(2)), -1.0);
  const Eigen::MatrixXd Acl = closed_loop_matrix(s, g);
  EXPECT_TRUE(Acl.row(idx.velocity_row(0)).isApprox(K));

  FeedbackGains bad;
  bad.set(3, 1.0, 1.0);
  EXPECT_THROW(feedback_row(s, bad), TopologyError);
  FeedbackGains self;
  self.set(0, 1.0, 1.0);
  EXPECT_THROW(feedback_row(s, self), TopologyError);
}

TEST(Table1, GainLadder) {
  EXPECT_TRUE(table1_gains("HDV").empty());
  const FeedbackGains d = table1_gains("D");
  EXPECT_EQ(d.ids(), (std::vector<int>{-2, -1, 1, 2}));
  EXPECT_EQ(d.mu_of(-2), 1.0);
  EXPECT_EQ(d.k_of(-2), -1.0);
  EXPECT_EQ(d.mu_of(1), -1.0);
  EXPECT_EQ(d.k_of(2), -1.0);
  EXPECT_EQ(table1_gains("A").ids(), (std::vector<int>{-2}));
  EXPECT_EQ(table1_gains("C").ids(), (std::vector<int>{-2, -1, 1}));
  EXPECT_THROW(table1_gains("E"), DomainError);
}
