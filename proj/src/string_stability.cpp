#include "lcc/string_stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

using cd = std::complex<double>;

std::string omega_text(double omega) {
  std::ostringstream out;
  out << "omega=" << omega << " rad/s";
  return out.str();
}

void set_axis_gain(FeedbackGains& gains, const GainAxis& axis, double value) {
  const double mu = gains.mu_of(axis.vehicle);
  const double k = gains.k_of(axis.vehicle);
  if (axis.kind == GainKind::Mu) {
    gains.set(axis.vehicle, value, k);
  } else {
    gains.set(axis.vehicle, mu, value);
  }
}

}  // namespace

void TransferSpec::validate() const {
  if (m < 0 || n < 0) throw TopologyError("m and n must be nonnegative");
  for (int id : gains.ids()) {
    if (id == 0 || id < -m || id > n) {
      std::ostringstream msg;
      msg << "gain id " << id << " outside {-" << m << "..-1} u {1.." << n << "}";
      throw TopologyError(msg.str());
    }
  }
}

void FrequencyGrid::validate() const {
  if (!(omega_min > 0.0)) throw DomainError("omega_min must be > 0");
  if (!(omega_max >= omega_min)) throw DomainError("omega_max must be >= omega_min");
  if (points < 1) throw DomainError("frequency grid needs at least one point");
  if (points == 1 && omega_max != omega_min) {
    throw DomainError("a one-point grid needs omega_min == omega_max");
  }
}

std::vector<double> FrequencyGrid::omegas() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = omega_min;
    return out;
  }
  const double l0 = std::log10(omega_min);
  const double l1 = std::log10(omega_max);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (points - 1));
  }
  out.front() = omega_min;
  out.back() = omega_max;
  return out;
}

std::pair<cd, cd> phi_gamma(const LinearCoeffs& c, cd s) {
  return {c.alpha3() * s + c.alpha1(), s * s + c.alpha2() * s + c.alpha1()};
}

cd gain_polynomial(const LinearCoeffs& c, double mu, double k, cd s) {
  const auto [phi, gamma] = phi_gamma(c, s);
  return mu * (gamma / phi - 1.0) + k * s;
}

cd head_to_tail_at(const TransferSpec& spec, cd s) {
  spec.validate();
  const double where = s.imag();
  const auto [phi, gamma] = phi_gamma(spec.coeffs, s);
  if (std::abs(gamma) == 0.0 || std::abs(phi) == 0.0) {
    throw EvaluationError("HDV transfer function has a pole at " + omega_text(where), where);
  }
  const cd ratio = phi / gamma;

  cd num = phi;
  cd den = gamma;
  for (int id : spec.gains.ids()) {
    const cd h = gain_polynomial(spec.coeffs, spec.gains.mu_of(id), spec.gains.k_of(id), s);
    if (id < 0) {
      num += h * std::pow(ratio, id + 1);
    } else {
      den -= h * std::pow(ratio, id);
    }
  }
  const double scale = std::abs(gamma) + std::abs(den - gamma);
  if (std::abs(den) <= 1e-13 * scale) {
    throw EvaluationError("closed-loop transfer function has a pole at " + omega_text(where),
                          where);
  }
  const cd result = num / den * std::pow(ratio, spec.n + spec.m);
  if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
    throw EvaluationError("non-finite head-to-tail response at " + omega_text(where), where);
  }
  return result;
}

cd head_to_tail(const TransferSpec& spec, double omega) {
  if (!(omega > 0.0)) throw DomainError("head-to-tail response needs omega > 0");
  return head_to_tail_at(spec, cd(0.0, omega));
}

SystemVariant variant_for(int m, int n) {
  if (m == 0) return SystemVariant::CF_LCC;
  if (n == 0) return SystemVariant::CCC;
  return SystemVariant::GeneralLCC;
}

ClosedLoop closed_loop(const TransferSpec& spec) {
  spec.validate();
  ClosedLoop cl{build_system(variant_for(spec.m, spec.n), spec.m, spec.n, spec.coeffs), {}};
  cl.A_cl = closed_loop_matrix(cl.model, spec.gains);
  return cl;
}

cd state_space_response(const ClosedLoop& cl, double omega) {
  if (!(omega > 0.0)) throw DomainError("frequency response needs omega > 0");
  const int dim = cl.model.dim();
  Eigen::MatrixXcd M = cd(0.0, omega) * Eigen::MatrixXcd::Identity(dim, dim) -
                       cl.A_cl.cast<cd>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  if (!(lu.rcond() > 1e-14)) {
    throw EvaluationError("closed-loop matrix has an eigenvalue at j" + omega_text(omega), omega);
  }
  const Eigen::VectorXcd x = lu.solve(cl.model.H->cast<cd>());
  return x(cl.model.index.velocity_row(cl.model.n));
}

cd state_space_response(const TransferSpec& spec, double omega) {
  return state_space_response(closed_loop(spec), omega);
}

double max_real_eigenvalue(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("closed-loop eigensolver failed");
  return es.eigenvalues().real().maxCoeff();
}

StringStabilityResult is_string_stable(const TransferSpec& spec, const FrequencyGrid& grid,
                                       double margin) {
  const std::vector<double> omegas = grid.omegas();
  const ClosedLoop cl = closed_loop(spec);

  StringStabilityResult out;
  out.asymptotically_stable = max_real_eigenvalue(cl.A_cl) <= kAsymptoticTol;

  auto mag = [&](double w) { return std::abs(head_to_tail(spec, w)); };
  std::size_t best = 0;
  std::vector<double> mags(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    mags[i] = mag(omegas[i]);
    if (mags[i] > mags[best]) best = i;
  }
  out.peak_omega = omegas[best];
  out.peak_mag = mags[best];

  if (omegas.size() > 1) {
    // Golden-section maximisation in log(omega) over the two neighbouring cells.
    double a = std::log(omegas[best == 0 ? 0 : best - 1]);
    double b = std::log(omegas[std::min(best + 1, omegas.size() - 1)]);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = mag(std::exp(x1));
    double f2 = mag(std::exp(x2));
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - r * (b - a);
        f1 = mag(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + r * (b - a);
        f2 = mag(std::exp(x2));
      }
    }
    const double xr = f1 > f2 ? x1 : x2;
    const double fr = std::max(f1, f2);
    if (fr > out.peak_mag) {
      out.peak_mag = fr;
      out.peak_omega = std::exp(xr);
    }
  }
  out.stable = out.peak_mag < 1.0 - margin;
  return out;
}

std::vector<std::pair<double, double>> magnitude_curve(const TransferSpec& spec,
                                                       const FrequencyGrid& grid) {
  std::vector<std::pair<double, double>> out;
  for (double w : grid.omegas()) out.emplace_back(w, std::abs(head_to_tail(spec, w)));
  return out;
}

void GainAxis::validate() const {
  if (resolution < 1) throw DomainError("axis resolution must be >= 1");
  if (!(hi >= lo)) throw DomainError("axis range must satisfy lo <= hi");
  if (resolution == 1 && hi != lo) throw DomainError("a one-point axis needs lo == hi");
}

double GainAxis::value(int i) const {
  if (resolution == 1) return lo;
  if (i == resolution - 1) return hi;
  return lo + (hi - lo) * i / (resolution - 1);
}

std::string GainAxis::label() const {
  return (kind == GainKind::Mu ? "mu" : "k") + std::to_string(vehicle);
}

GainAxis parse_gain_axis(const std::string& text) {
  GainAxis axis;
  std::string rest;
  if (text.rfind("mu", 0) == 0) {
    axis.kind = GainKind::Mu;
    rest = text.substr(2);
  } else if (text.rfind('k', 0) == 0) {
    axis.kind = GainKind::K;
    rest = text.substr(1);
  } else {
    throw DomainError("gain axis '" + text + "' must look like mu<id> or k<id>");
  }
  std::size_t used = 0;
  try {
    axis.vehicle = std::stoi(rest, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (rest.empty() || used != rest.size()) {
    throw DomainError("gain axis '" + text + "' has no integer vehicle id");
  }
  return axis;
}

std::string_view to_string(RegionClass c) {
  switch (c) {
    case RegionClass::StringStable: return "SS";
    case RegionClass::StringUnstable: return "SU";
    case RegionClass::AsympUnstable: return "AU";
  }
  return "?";
}

RegionClass RegionMap::at(int i, int j) const {
  return cells.at(static_cast<std::size_t>(i) * static_cast<std::size_t>(axis2.resolution) +
                  static_cast<std::size_t>(j));
}

int RegionMap::count(RegionClass c) const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), c));
}

void RegionMap::write_csv(std::ostream& out) const {
  out << "axis1,axis2,class\n";
  char buf[64];
  for (int i = 0; i < axis1.resolution; ++i) {
    for (int j = 0; j < axis2.resolution; ++j) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,", axis1.value(i), axis2.value(j));
      out << buf << to_string(at(i, j)) << '\n';
    }
  }
}

RegionClass classify(const TransferSpec& spec, const FrequencyGrid& grid) {
  const ClosedLoop cl = closed_loop(spec);
  if (max_real_eigenvalue(cl.A_cl) > kAsymptoticTol) return RegionClass::AsympUnstable;
  return is_string_stable(spec, grid).stable ? RegionClass::StringStable
                                             : RegionClass::StringUnstable;
}

RegionMap scan_region(const TransferSpec& base, const GainAxis& axis1, const GainAxis& axis2,
                      const FrequencyGrid& grid) {
  axis1.validate();
  axis2.validate();
  grid.validate();
  if (axis1.vehicle == axis2.vehicle && axis1.kind == axis2.kind) {
    throw DomainError("scan axes must refer to distinct gains");
  }
  TransferSpec probe = base;
  set_axis_gain(probe.gains, axis1, 0.0);
  set_axis_gain(probe.gains, axis2, 0.0);
  probe.validate();

  RegionMap map{axis1, axis2, {}, {}};
  map.cells.reserve(static_cast<std::size_t>(axis1.resolution) *
                    static_cast<std::size_t>(axis2.resolution));
  for (int i = 0; i < axis1.resolution; ++i) {
    for (int j = 0; j < axis2.resolution; ++j) {
      TransferSpec spec = base;
      set_axis_gain(spec.gains, axis1, axis1.value(i));
      set_axis_gain(spec.gains, axis2, axis2.value(j));
      try {
        map.cells.push_back(classify(spec, grid));
      } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << axis1.label() << '=' << axis1.value(i) << ' ' << axis2.label() << '='
            << axis2.value(j) << ": " << e.what();
        map.diagnostics.push_back(msg.str());
        map.cells.push_back(RegionClass::AsympUnstable);
      }
    }
  }
  return map;
}

}  // namespace lcc
