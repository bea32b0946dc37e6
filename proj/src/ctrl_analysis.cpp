#include "lcc/ctrl_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Eigenvalues of a defective (Jordan) block come back spread by roughly
// (eps ||A||)^(1/size); members closer than this are treated as one eigenvalue.
constexpr double kClusterTol = 1e-2;
constexpr double kSingularRatio = 1e-12;

void require_finite(const Eigen::MatrixXd& M, const char* what) {
  if (!M.allFinite()) throw NumericalError(std::string(what) + " has non-finite entries");
}

double rank_threshold(int dim, double tol, double sigma_max) {
  return std::max(tol, dim * kEps) * sigma_max;
}

struct KrylovRank {
  int rank = 0;
  Eigen::MatrixXd U;  // full left singular basis, controllable part first
};

// Rank of [B, AB, ..., A^{dim-1} B] with columns scaled to unit length.
// Columns whose norm is pure round-off relative to ||A||^k ||B|| are dropped
// so the normalisation cannot promote noise to a direction.
KrylovRank krylov_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  const int dim = static_cast<int>(A.rows());
  const int p = static_cast<int>(B.cols());
  const double a_norm = std::max(A.norm(), 1.0);

  Eigen::MatrixXd K(dim, dim * p);
  int used = 0;
  Eigen::MatrixXd block = B;
  double scale = 1.0;
  for (int power = 0; power < dim; ++power) {
    for (int j = 0; j < p; ++j) {
      const double norm = block.col(j).norm();
      const double noise = 1e3 * kEps * scale * std::max(B.col(j).norm(), 1.0) * (power + 1);
      if (norm > noise) K.col(used++) = block.col(j) / norm;
    }
    block = A * block;
    scale *= a_norm;
  }

  KrylovRank out;
  if (used == 0) {
    out.U = Eigen::MatrixXd::Identity(dim, dim);
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K.leftCols(used), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double cut = rank_threshold(dim, tol, sv(0));
  out.rank = static_cast<int>((sv.array() > cut).count());
  out.U = svd.matrixU();
  return out;
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  std::vector<std::complex<double>> out(es.eigenvalues().begin(), es.eigenvalues().end());
  return out;
}

struct EigenCluster {
  std::complex<double> mean;
  std::vector<std::complex<double>> members;
};

// Single-linkage clustering. A defective eigenvalue splits numerically into a
// small ring of estimates; their mean is far more accurate than any member.
std::vector<EigenCluster> cluster_eigenvalues(const std::vector<std::complex<double>>& ev,
                                              double radius) {
  const std::size_t count = ev.size();
  std::vector<int> label(count, -1);
  int next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t cur = frontier.back();
      frontier.pop_back();
      for (std::size_t j = 0; j < count; ++j) {
        if (label[j] < 0 && std::abs(ev[j] - ev[cur]) <= radius) {
          label[j] = next;
          frontier.push_back(j);
        }
      }
    }
    ++next;
  }
  std::vector<EigenCluster> clusters(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < count; ++i) {
    auto& c = clusters[static_cast<std::size_t>(label[i])];
    c.mean += ev[i];
    c.members.push_back(ev[i]);
  }
  for (auto& c : clusters) c.mean /= static_cast<double>(c.members.size());
  return clusters;
}

bool pbh_full_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, std::complex<double> lambda,
                   double tol) {
  const Eigen::Index dim = A.rows();
  Eigen::MatrixXcd M(dim, dim + B.cols());
  M.leftCols(dim) = lambda * Eigen::MatrixXcd::Identity(dim, dim) - A.cast<std::complex<double>>();
  M.rightCols(B.cols()) = B.cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return false;
  return sv(dim - 1) > rank_threshold(static_cast<int>(dim), tol, sv(0));
}

}  // namespace

double condition_check(const LinearCoeffs& c) {
  return c.alpha1() - c.alpha2() * c.alpha3() + c.alpha3() * c.alpha3();
}

ControllabilityReport pbh_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                          double tol) {
  if (A.rows() != A.cols()) throw DomainError("A must be square");
  if (B.rows() != A.rows()) throw DomainError("B must have as many rows as A");
  if (!(tol > 0.0)) throw DomainError("rank tolerance must be > 0");
  require_finite(A, "A");
  require_finite(B, "B");

  const int dim = static_cast<int>(A.rows());
  ControllabilityReport report;

  const KrylovRank kr = krylov_rank(A, B, tol);
  report.controllable_dim = kr.rank;
  report.controllable_basis = kr.U.leftCols(kr.rank);
  report.controllable = kr.rank == dim;

  const double radius = kClusterTol * std::max(1.0, A.lpNorm<Eigen::Infinity>());
  for (const auto& c : cluster_eigenvalues(eigenvalues_of(A), radius)) {
    // Distinct but close eigenvalues also land in one cluster, so members are
    // tested on their own as well.
    bool full = pbh_full_rank(A, B, c.mean, tol);
    if (c.members.size() > 1) {
      for (const auto& lambda : c.members) full = full && pbh_full_rank(A, B, lambda, tol);
    }
    if (!full) report.pbh_deficient_eigenvalues.push_back(c.mean);
  }
  report.pbh_controllable = report.pbh_deficient_eigenvalues.empty();

  if (report.pbh_controllable != report.controllable) {
    std::ostringstream msg;
    msg << "PBH test (" << (report.pbh_controllable ? "controllable" : "uncontrollable")
        << ") disagrees with controllability-matrix rank " << kr.rank << "/" << dim
        << "; try a different rank tolerance";
    throw NumericalError(msg.str());
  }

  if (kr.rank < dim) {
    const Eigen::MatrixXd U2 = kr.U.rightCols(dim - kr.rank);
    const Eigen::MatrixXd A22 = U2.transpose() * A * U2;
    report.uncontrollable_mode_eigenvalues = eigenvalues_of(A22);
  }
  return report;
}

ControllabilityReport analyze_controllability(const StateSpaceModel& model, double tol) {
  ControllabilityReport r = pbh_controllability(model.A, model.B, tol);
  r.condition_value = condition_check(model.coeffs);
  return r;
}

ObservabilityReport pbh_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                      double tol) {
  if (C.cols() != A.cols()) throw DomainError("C must have as many columns as A");
  const ControllabilityReport dual = pbh_controllability(A.transpose(), C.transpose(), tol);
  ObservabilityReport report;
  report.observable = dual.controllable;
  report.observable_dim = dual.controllable_dim;
  // null(O) is the orthogonal complement of range(O^T), the dual's
  // controllable subspace.
  const int dim = static_cast<int>(A.rows());
  if (dual.controllable_dim < dim) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dual.controllable_basis, Eigen::ComputeFullU);
    report.unobservable_basis = svd.matrixU().rightCols(dim - dual.controllable_dim);
  } else {
    report.unobservable_basis = Eigen::MatrixXd(dim, 0);
  }
  return report;
}

ObservabilityReport analyze_observability(const StateSpaceModel& model, const Eigen::MatrixXd& C,
                                          double tol) {
  ObservabilityReport report = pbh_observability(model.A, C, tol);
  if (report.unobservable_basis.cols() == 0) return report;
  for (int id = model.index.first_vehicle(); id <= model.index.last_vehicle(); ++id) {
    const double weight = report.unobservable_basis.row(model.index.spacing_row(id)).norm() +
                          report.unobservable_basis.row(model.index.velocity_row(id)).norm();
    if (weight > 1e-6) report.unobservable_vehicle_ids.push_back(id);
  }
  return report;
}

Eigen::MatrixXd build_output_matrix(const StateSpaceModel& model, int k) {
  if (k < 1 || k > model.n) {
    std::ostringstream msg;
    msg << "measured vehicle k=" << k << " must lie in [1, " << model.n << "]";
    throw TopologyError(msg.str());
  }
  const auto& idx = model.index;
  if (model.variant == SystemVariant::GeneralLCC) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(3, model.dim());
    C(0, idx.spacing_row(0)) = 1.0;
    C(1, idx.velocity_row(0)) = 1.0;
    C(2, idx.velocity_row(k)) = 1.0;
    return C;
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, model.dim());
  C(0, idx.velocity_row(k)) = 1.0;
  return C;
}

Eigen::MatrixXd own_state_output_matrix(const StateSpaceModel& model) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, model.dim());
  C(0, model.index.spacing_row(0)) = 1.0;
  C(1, model.index.velocity_row(0)) = 1.0;
  return C;
}

GramianResult gramian(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t, double dt) {
  if (!(t > 0.0)) throw DomainError("Gramian horizon must be > 0");
  if (!(dt > 0.0)) throw DomainError("Gramian step must be > 0");
  if (A.rows() != A.cols() || B.rows() != A.rows()) throw DomainError("A, B do not conform");
  require_finite(A, "A");
  require_finite(B, "B");

  const auto steps = static_cast<long>(std::max(1.0, std::ceil(t / dt - 1e-9)));
  const double h = t / static_cast<double>(steps);
  const Eigen::MatrixXd Q = B * B.transpose();
  const Eigen::MatrixXd At = A.transpose();
  auto rhs = [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd { return A * W + W * At + Q; };

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  for (long i = 0; i < steps; ++i) {
    const Eigen::MatrixXd k1 = rhs(W);
    const Eigen::MatrixXd k2 = rhs(W + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = rhs(W + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = rhs(W + h * k3);
    W += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  W = 0.5 * (W + W.transpose()).eval();
  require_finite(W, "Gramian");

  GramianResult out;
  out.W = W;
  out.t_horizon = t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Gramian eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  out.lambda_min = ev.minCoeff();
  out.lambda_max = ev.maxCoeff();
  if (out.lambda_max > 0.0 && out.lambda_min >= kSingularRatio * out.lambda_max) {
    out.trace_inv = ev.cwiseInverse().sum();
  }
  return out;
}

double min_energy(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t,
                  const Eigen::VectorXd& x0, const Eigen::VectorXd& x_tar, double dt) {
  if (x0.size() != A.rows() || x_tar.size() != A.rows()) {
    throw DomainError("state vectors do not match the system dimension");
  }
  const GramianResult g = gramian(A, B, t, dt);
  if (g.singular()) {
    std::ostringstream msg;
    msg << "controllability Gramian is numerically singular (lambda_min=" << g.lambda_min
        << ", lambda_max=" << g.lambda_max << ")";
    throw SingularityError(msg.str(), g.lambda_min);
  }
  const Eigen::MatrixXd transition = (A * t).exp();
  const Eigen::VectorXd displacement = x_tar - transition * x0;
  Eigen::LLT<Eigen::MatrixXd> llt(g.W);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("controllability Gramian is not positive definite", g.lambda_min);
  }
  // d^T W^{-1} d = |L^{-1} d|^2, nonnegative by construction.
  const Eigen::VectorXd y = llt.matrixL().solve(displacement);
  return y.squaredNorm();
}

std::vector<EnergyRow> energy_scaling_study(SystemVariant variant, const std::vector<int>& n_range,
                                            const std::vector<double>& t_list,
                                            const LinearCoeffs& c, double dt) {
  if (n_range.empty()) throw DomainError("energy study needs at least one system size");
  if (variant != SystemVariant::FD_LCC && variant != SystemVariant::CF_LCC) {
    throw TopologyError("energy study is defined for the fd and cf chains only");
  }
  std::vector<int> sizes = n_range;
  std::sort(sizes.begin(), sizes.end());
  std::vector<double> horizons = t_list;
  std::sort(horizons.begin(), horizons.end());

  std::vector<EnergyRow> rows;
  rows.reserve(sizes.size() * horizons.size());
  for (int n : sizes) {
    const StateSpaceModel model = build_system(variant, 0, n, c);
    for (double t : horizons) {
      const GramianResult g = gramian(model.A, model.B, t, dt);
      rows.push_back({n, t, g.lambda_min, g.trace_inv});
    }
  }
  return rows;
}

}  // namespace lcc
