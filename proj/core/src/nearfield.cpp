#include "biphoton/nearfield.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

constexpr int kMinPoints = 64;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> centered_axis(int n, double step) {
  std::vector<double> a(static_cast<std::size_t>(n));
  const int c = n / 2;
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = (j - c) * step;
  return a;
}

// out(m_i, m_s) = sum_{a,b} in(a, b) exp(sign_i 2 pi i (a-c_i)(m_i-c_i)/n_i) exp(sign_s 2 pi i (b-c_s)(m_s-c_s)/n_s)
Eigen::MatrixXcd centered_dft(const Eigen::MatrixXcd& in, int sign_i, int sign_s) {
  const int ni = static_cast<int>(in.rows());
  const int ns = static_cast<int>(in.cols());
  const int ci = ni / 2;
  const int cs = ns / 2;

  Eigen::MatrixXcd buf(ni, ns);
  for (int b = 0; b < ns; ++b) {
    for (int a = 0; a < ni; ++a) buf((a - ci + ni) % ni, (b - cs + ns) % ns) = in(a, b);
  }

  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  {
    std::lock_guard lock(planner_mutex());
    // Along the idler axis: each column is contiguous.
    fftw_plan pi = fftw_plan_many_dft(1, &ni, ns, data, nullptr, 1, ni, data, nullptr, 1, ni,
                                      sign_i < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_plan ps = fftw_plan_many_dft(1, &ns, ni, data, nullptr, ni, 1, data, nullptr, ni, 1,
                                      sign_s < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!pi || !ps) throw NumericError("FFT planning failed");
    fftw_execute(pi);
    fftw_execute(ps);
    fftw_destroy_plan(pi);
    fftw_destroy_plan(ps);
  }

  Eigen::MatrixXcd out(ni, ns);
  for (int b = 0; b < ns; ++b) {
    for (int a = 0; a < ni; ++a) out(a, b) = buf((a - ci + ni) % ni, (b - cs + ns) % ns);
  }
  return out;
}

void require_resolution(const JointAmplitude& amp) {
  if (amp.axis_i.size() < kMinPoints || amp.axis_s.size() < kMinPoints) {
    throw ResolutionError("near-field transform needs at least 64 points per axis");
  }
}

double interpolate_index(const std::vector<double>& axis, double x) {
  const double h = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  return (x - axis.front()) / h;
}

}  // namespace

JointAmplitude resample_to_wavevector(const JointAmplitude& amp) {
  if (amp.domain != Domain::far_field_angle) throw ArgumentError("resampling expects an angle-domain amplitude");
  if (!(amp.wavenumber_i > 0.0) || !(amp.wavenumber_s > 0.0)) {
    throw ArgumentError("angle-domain amplitude lacks axis wavenumbers");
  }
  constexpr double deg = 180.0 / std::numbers::pi;
  const int ni = static_cast<int>(amp.axis_i.size());
  const int ns = static_cast<int>(amp.axis_s.size());
  const double qi_max = amp.wavenumber_i * std::sin(amp.axis_i.back() / deg);
  const double qs_max = amp.wavenumber_s * std::sin(amp.axis_s.back() / deg);
  const auto qi = centered_axis(ni, 2.0 * qi_max / (ni - 1));
  const auto qs = centered_axis(ns, 2.0 * qs_max / (ns - 1));

  // Fractional source indices and weights per target sample.
  auto locate = [](const std::vector<double>& q, double k, const std::vector<double>& theta_axis) {
    std::vector<std::pair<int, double>> loc(q.size());
    const int last = static_cast<int>(theta_axis.size()) - 1;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double t = std::asin(std::clamp(q[j] / k, -1.0, 1.0)) * deg;
      const double f = std::clamp(interpolate_index(theta_axis, t), 0.0, static_cast<double>(last));
      const int lo = std::min(static_cast<int>(std::floor(f)), last - 1);
      loc[j] = {lo, f - lo};
    }
    return loc;
  };
  const auto li = locate(qi, amp.wavenumber_i, amp.axis_i);
  const auto ls = locate(qs, amp.wavenumber_s, amp.axis_s);

  Eigen::MatrixXcd v(ni, ns);
  for (int b = 0; b < ns; ++b) {
    const auto [s0, ws] = ls[static_cast<std::size_t>(b)];
    for (int a = 0; a < ni; ++a) {
      const auto [i0, wi] = li[static_cast<std::size_t>(a)];
      v(a, b) = (1 - wi) * (1 - ws) * amp.values(i0, s0) + wi * (1 - ws) * amp.values(i0 + 1, s0) +
                (1 - wi) * ws * amp.values(i0, s0 + 1) + wi * ws * amp.values(i0 + 1, s0 + 1);
    }
  }
  auto out = make_amplitude(Domain::far_field_wavevector, qi, qs, std::move(v));
  out.norm_constant *= amp.norm_constant;
  return out;
}

JointAmplitude to_near_field(const JointAmplitude& far) {
  if (far.domain == Domain::near_field_position) throw ArgumentError("amplitude is already in the near field");
  require_resolution(far);
  const JointAmplitude q_amp = far.domain == Domain::far_field_angle ? resample_to_wavevector(far) : far;

  const int ni = static_cast<int>(q_amp.axis_i.size());
  const int ns = static_cast<int>(q_amp.axis_s.size());
  const double dqi = q_amp.step_i();
  const double dqs = q_amp.step_s();
  Eigen::MatrixXcd psi = centered_dft(q_amp.values, -1, +1) * (dqi * dqs / (2.0 * std::numbers::pi));
  auto xi = centered_axis(ni, 2.0 * std::numbers::pi / (ni * dqi));
  auto xs = centered_axis(ns, 2.0 * std::numbers::pi / (ns * dqs));
  auto out = make_amplitude(Domain::near_field_position, std::move(xi), std::move(xs), std::move(psi));
  out.norm_constant *= q_amp.norm_constant;
  return out;
}

JointAmplitude to_far_field(const JointAmplitude& near) {
  if (near.domain != Domain::near_field_position) throw ArgumentError("expected a near-field amplitude");
  require_resolution(near);
  const int ni = static_cast<int>(near.axis_i.size());
  const int ns = static_cast<int>(near.axis_s.size());
  const double dxi = near.step_i();
  const double dxs = near.step_s();
  Eigen::MatrixXcd f = centered_dft(near.values, +1, -1) * (dxi * dxs / (2.0 * std::numbers::pi));
  auto qi = centered_axis(ni, 2.0 * std::numbers::pi / (ni * dxi));
  auto qs = centered_axis(ns, 2.0 * std::numbers::pi / (ns * dxs));
  return make_amplitude(Domain::far_field_wavevector, std::move(qi), std::move(qs), std::move(f));
}

}  // namespace biphoton
