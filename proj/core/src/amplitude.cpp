#include "biphoton/amplitude.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double uniform_step(const std::vector<double>& axis) {
  if (axis.size() < 2) return 1.0;
  return (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
}

// Transverse and longitudinal wavevector components of one photon along an axis.
struct AxisComponents {
  std::vector<double> q;
  std::vector<double> kz;
  std::vector<bool> propagating;
};

AxisComponents angle_components(const std::vector<double>& theta_deg, double k_axis, double k_crystal,
                                bool refraction) {
  AxisComponents c;
  c.q.resize(theta_deg.size());
  c.kz.resize(theta_deg.size());
  c.propagating.assign(theta_deg.size(), true);
  for (std::size_t j = 0; j < theta_deg.size(); ++j) {
    const double t = theta_deg[j] * kDeg;
    c.q[j] = k_axis * std::sin(t);
    c.kz[j] = refraction ? std::sqrt(k_crystal * k_crystal - c.q[j] * c.q[j]) : k_crystal * std::cos(t);
  }
  return c;
}

AxisComponents wavevector_components(const std::vector<double>& q, double k_crystal) {
  AxisComponents c;
  c.q = q;
  c.kz.resize(q.size());
  c.propagating.resize(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double rem = k_crystal * k_crystal - q[j] * q[j];
    c.propagating[j] = rem > 0.0;
    c.kz[j] = c.propagating[j] ? std::sqrt(rem) : 0.0;
  }
  return c;
}

Eigen::MatrixXcd fill(const OpticalSetup& setup, const Wavenumbers& k, const AxisComponents& idler,
                      const AxisComponents& signal) {
  const auto ni = static_cast<Eigen::Index>(idler.q.size());
  const auto ns = static_cast<Eigen::Index>(signal.q.size());
  const double sigma = setup.pump_amplitude_std_um();
  Eigen::MatrixXcd values(ni, ns);
  for (Eigen::Index s = 0; s < ns; ++s) {
    const auto su = static_cast<std::size_t>(s);
    for (Eigen::Index i = 0; i < ni; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      if (!idler.propagating[iu] || !signal.propagating[su]) {
        values(i, s) = 0.0;
        continue;
      }
      const double dk_perp = signal.q[su] - idler.q[iu];
      const double dk_par = k.pump - (signal.kz[su] + idler.kz[iu]) - k.grating;
      double pm = phase_matching(dk_par, setup.length_um);
      if (setup.phasematch_exponent == 2) pm *= pm;
      values(i, s) = pump_envelope(dk_perp, sigma) * pm;
    }
  }
  return values;
}

}  // namespace

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::far_field_angle:
      return "far_field_angle";
    case Domain::far_field_wavevector:
      return "far_field_wavevector";
    case Domain::near_field_position:
      return "near_field_position";
  }
  return "unknown";
}

double JointAmplitude::step_i() const { return uniform_step(axis_i); }
double JointAmplitude::step_s() const { return uniform_step(axis_s); }

Eigen::MatrixXd JointAmplitude::intensity() const { return values.cwiseAbs2(); }

double JointAmplitude::total_probability() const { return values.cwiseAbs2().sum() * step_i() * step_s(); }

JointAmplitude make_amplitude(Domain domain, std::vector<double> axis_i, std::vector<double> axis_s,
                              Eigen::MatrixXcd values, double wavenumber_i, double wavenumber_s) {
  if (values.rows() != static_cast<Eigen::Index>(axis_i.size()) ||
      values.cols() != static_cast<Eigen::Index>(axis_s.size())) {
    throw ArgumentError("amplitude matrix dimensions do not match its axes");
  }
  JointAmplitude amp;
  amp.domain = domain;
  amp.axis_i = std::move(axis_i);
  amp.axis_s = std::move(axis_s);
  amp.values = std::move(values);
  amp.wavenumber_i = wavenumber_i;
  amp.wavenumber_s = wavenumber_s;
  const double p = amp.total_probability();
  if (!(p > 0.0) || !std::isfinite(p)) throw NumericError("amplitude has zero or non-finite norm");
  amp.norm_constant = 1.0 / std::sqrt(p);
  amp.values *= amp.norm_constant;
  return amp;
}

MismatchPair mismatch(double theta_i_deg, double theta_s_deg, const OpticalSetup& setup) {
  if (!(std::abs(theta_i_deg) < 90.0) || !(std::abs(theta_s_deg) < 90.0)) {
    throw DomainError("emission angles must satisfy |theta| < 90 deg");
  }
  const auto k = wavenumbers(setup);
  const auto idler = angle_components({theta_i_deg}, k.idler_axis, k.idler, setup.refraction);
  const auto signal = angle_components({theta_s_deg}, k.signal_axis, k.signal, setup.refraction);
  return {signal.q[0] - idler.q[0], k.pump - (signal.kz[0] + idler.kz[0]) - k.grating};
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double pump_envelope(double dk_perp, double sigma_um) {
  if (!(sigma_um > 0.0)) throw ArgumentError("pump waist must be > 0");
  const double a = dk_perp * sigma_um;
  return std::exp(-0.5 * a * a);
}

double phase_matching(double dk_par, double length_um) {
  if (!(length_um > 0.0)) throw ArgumentError("crystal length must be > 0");
  return sinc(0.5 * dk_par * length_um);
}

JointAmplitude build_joint_amplitude(const OpticalSetup& setup, const AngularGrid& grid) {
  setup.validate();
  const auto axis = grid.axis();
  const auto k = wavenumbers(setup);
  const auto idler = angle_components(axis, k.idler_axis, k.idler, setup.refraction);
  const auto signal = angle_components(axis, k.signal_axis, k.signal, setup.refraction);
  return make_amplitude(Domain::far_field_angle, axis, axis, fill(setup, k, idler, signal), k.idler_axis,
                        k.signal_axis);
}

JointAmplitude build_joint_amplitude(const OpticalSetup& setup, const WavevectorGrid& grid) {
  setup.validate();
  const auto axis = grid.axis();
  const auto k = wavenumbers(setup);
  const auto idler = wavevector_components(axis, k.idler);
  const auto signal = wavevector_components(axis, k.signal);
  return make_amplitude(Domain::far_field_wavevector, axis, axis, fill(setup, k, idler, signal), k.idler,
                        k.signal);
}

JointAmplitude restrict_to_main_lobe(const JointAmplitude& amp, const OpticalSetup& setup) {
  if (amp.domain == Domain::near_field_position) {
    throw ArgumentError("main-lobe restriction needs a far-field amplitude");
  }
  const auto k = wavenumbers(setup);
  const auto idler = amp.domain == Domain::far_field_angle
                         ? angle_components(amp.axis_i, k.idler_axis, k.idler, setup.refraction)
                         : wavevector_components(amp.axis_i, k.idler);
  const auto signal = amp.domain == Domain::far_field_angle
                          ? angle_components(amp.axis_s, k.signal_axis, k.signal, setup.refraction)
                          : wavevector_components(amp.axis_s, k.signal);

  const auto ni = amp.values.rows();
  const auto ns = amp.values.cols();
  Eigen::MatrixXd half_phase(ni, ns);
  double lowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double dk_par = k.pump - (signal.kz[static_cast<std::size_t>(s)] + idler.kz[static_cast<std::size_t>(i)]) -
                            k.grating;
      half_phase(i, s) = std::abs(0.5 * dk_par * setup.length_um);
      if (idler.propagating[static_cast<std::size_t>(i)] && signal.propagating[static_cast<std::size_t>(s)]) {
        lowest = std::min(lowest, half_phase(i, s));
      }
    }
  }
  const double first_zero = std::numbers::pi * (std::floor(lowest / std::numbers::pi) + 1.0);
  Eigen::MatrixXcd masked = amp.values;
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index i = 0; i < ni; ++i) {
      if (!(half_phase(i, s) < first_zero)) masked(i, s) = 0.0;
    }
  }
  auto out = make_amplitude(amp.domain, amp.axis_i, amp.axis_s, std::move(masked), amp.wavenumber_i,
                            amp.wavenumber_s);
  out.norm_constant *= amp.norm_constant;
  return out;
}

}  // namespace biphoton
