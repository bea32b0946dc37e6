#include "lcc/system_assembly.hpp"

#include <algorithm>
#include <sstream>

#include "lcc/errors.hpp"

namespace lcc {

std::string_view to_string(SystemVariant v) {
  switch (v) {
    case SystemVariant::GeneralLCC: return "general";
    case SystemVariant::CF_LCC: return "cf";
    case SystemVariant::FD_LCC: return "fd";
    case SystemVariant::CCC: return "ccc";
  }
  return "unknown";
}

SystemVariant parse_variant(std::string_view text) {
  if (text == "general" || text == "GeneralLCC" || text == "lcc") return SystemVariant::GeneralLCC;
  if (text == "cf" || text == "CF_LCC" || text == "cf-lcc") return SystemVariant::CF_LCC;
  if (text == "fd" || text == "FD_LCC" || text == "fd-lcc") return SystemVariant::FD_LCC;
  if (text == "ccc" || text == "CCC") return SystemVariant::CCC;
  throw TopologyError("unknown system variant '" + std::string(text) +
                      "' (expected general, cf, fd or ccc)");
}

void validate_topology(SystemVariant variant, int m, int n) {
  bool ok = false;
  switch (variant) {
    case SystemVariant::GeneralLCC: ok = m >= 1 && n >= 1; break;
    case SystemVariant::CF_LCC:
    case SystemVariant::FD_LCC: ok = m == 0 && n >= 0; break;
    case SystemVariant::CCC: ok = m >= 1 && n == 0; break;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "topology (m=" << m << ", n=" << n << ") not admissible for variant "
        << to_string(variant);
    throw TopologyError(msg.str());
  }
}

StateIndexMap::StateIndexMap(SystemVariant variant, int m, int n) : m_(m), n_(n) {
  validate_topology(variant, m, n);
  slots_.reserve(static_cast<std::size_t>(2 * (m + n + 1)));
  for (int id = -m; id <= n; ++id) {
    const bool free_cav = id == 0 && variant == SystemVariant::FD_LCC;
    slots_.push_back({id, free_cav ? StateKind::NegatedPosition : StateKind::Spacing});
    slots_.push_back({id, StateKind::Velocity});
  }
}

int StateIndexMap::spacing_row(int vehicle) const {
  if (!contains(vehicle)) {
    throw TopologyError("vehicle " + std::to_string(vehicle) + " not in state map");
  }
  return 2 * (vehicle + m_);
}

int StateIndexMap::velocity_row(int vehicle) const { return spacing_row(vehicle) + 1; }

int StateIndexMap::row(StateSlot s) const {
  const int r = s.kind == StateKind::Velocity ? velocity_row(s.vehicle) : spacing_row(s.vehicle);
  if (!(slots_[static_cast<std::size_t>(r)] == s)) {
    throw TopologyError("state slot kind does not match vehicle " + std::to_string(s.vehicle));
  }
  return r;
}

const StateSlot& StateIndexMap::slot(int row) const {
  if (row < 0 || row >= dim()) throw TopologyError("state row out of range");
  return slots_[static_cast<std::size_t>(row)];
}

double FeedbackGains::mu_of(int vehicle) const {
  auto it = mu.find(vehicle);
  return it == mu.end() ? 0.0 : it->second;
}

double FeedbackGains::k_of(int vehicle) const {
  auto it = k.find(vehicle);
  return it == k.end() ? 0.0 : it->second;
}

void FeedbackGains::set(int vehicle, double mu_gain, double k_gain) {
  mu[vehicle] = mu_gain;
  k[vehicle] = k_gain;
}

std::vector<int> FeedbackGains::ids() const {
  std::vector<int> out;
  for (const auto& [id, _] : mu) out.push_back(id);
  for (const auto& [id, _] : k) out.push_back(id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> table1_case_names() { return {"HDV", "A", "B", "C", "D"}; }

FeedbackGains table1_gains(std::string_view case_name) {
  FeedbackGains g;
  if (case_name == "HDV") return g;
  // Each case extends the previous one by one vehicle.
  const std::vector<std::pair<int, std::pair<double, double>>> ladder = {
      {-2, {1.0, -1.0}}, {-1, {1.0, -1.0}}, {1, {-1.0, -1.0}}, {2, {-1.0, -1.0}}};
  std::size_t count = 0;
  if (case_name == "A") count = 1;
  else if (case_name == "B") count = 2;
  else if (case_name == "C") count = 3;
  else if (case_name == "D") count = 4;
  else throw DomainError("unknown gain case '" + std::string(case_name) + "'");
  for (std::size_t i = 0; i < count; ++i) {
    g.set(ladder[i].first, ladder[i].second.first, ladder[i].second.second);
  }
  return g;
}

StateSpaceModel build_system(SystemVariant variant, int m, int n, const LinearCoeffs& c) {
  validate_topology(variant, m, n);

  Eigen::Matrix2d P1, P2, S1, S2;
  P1 << 0.0, -1.0, c.alpha1(), -c.alpha2();
  P2 << 0.0, 1.0, 0.0, c.alpha3();
  S1 << 0.0, -1.0, 0.0, 0.0;
  S2 << 0.0, 1.0, 0.0, 0.0;

  StateSpaceModel model;
  model.variant = variant;
  model.m = m;
  model.n = n;
  model.coeffs = c;
  model.index = StateIndexMap(variant, m, n);

  const int dim = model.index.dim();
  model.A = Eigen::MatrixXd::Zero(dim, dim);
  model.B = Eigen::VectorXd::Zero(dim);

  // CF_LCC: the CAV runs the HDV law towards the head, so its diagonal block
  // is P1 and it has no coupling block above it.
  const bool cav_is_hdv_like = variant == SystemVariant::CF_LCC;
  for (int id = -m; id <= n; ++id) {
    const int r = model.index.spacing_row(id);
    const bool cav = id == 0;
    model.A.block<2, 2>(r, r) = (cav && !cav_is_hdv_like) ? S1 : P1;
    if (id > -m) {
      model.A.block<2, 2>(r, r - 2) = cav ? S2 : P2;
    }
  }
  model.B(model.index.velocity_row(0)) = 1.0;

  if (variant != SystemVariant::FD_LCC) {
    Eigen::VectorXd H = Eigen::VectorXd::Zero(dim);
    H(0) = 1.0;
    H(1) = c.alpha3();
    model.H = std::move(H);
  }
  return model;
}

Eigen::RowVectorXd feedback_row(const StateSpaceModel& model, const FeedbackGains& gains) {
  const auto& idx = model.index;
  const bool self_gains_allowed =
      model.variant == SystemVariant::FD_LCC || model.variant == SystemVariant::CF_LCC;
  for (int id : gains.ids()) {
    if (!idx.contains(id) || (id == 0 && !self_gains_allowed)) {
      std::ostringstream msg;
      msg << "gain id " << id << " outside topology [" << -model.m << ", " << model.n
          << "] of variant " << to_string(model.variant);
      throw TopologyError(msg.str());
    }
  }

  Eigen::RowVectorXd K = Eigen::RowVectorXd::Zero(model.dim());
  const auto& c = model.coeffs;
  if (model.variant == SystemVariant::GeneralLCC || model.variant == SystemVariant::CCC) {
    K(idx.spacing_row(0)) += c.alpha1();
    K(idx.velocity_row(0)) -= c.alpha2();
    K(idx.velocity_row(-1)) += c.alpha3();
  }
  for (int id : gains.ids()) {
    K(idx.spacing_row(id)) += gains.mu_of(id);
    K(idx.velocity_row(id)) += gains.k_of(id);
  }
  return K;
}

Eigen::MatrixXd closed_loop_matrix(const StateSpaceModel& model, const FeedbackGains& gains) {
  return model.A + model.B * feedback_row(model, gains);
}

}  // namespace lcc
