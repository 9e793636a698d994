#include "biphoton/metrics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

double half_crossing(const std::vector<double>& axis, const std::vector<double>& v, std::size_t peak, double half,
                     int dir) {
  auto j = static_cast<long>(peak);
  const auto n = static_cast<long>(v.size());
  while (true) {
    const long next = j + dir;
    if (next < 0 || next >= n) throw ResolutionError("grid too small: distribution never drops below half maximum");
    const auto a = static_cast<std::size_t>(j);
    const auto b = static_cast<std::size_t>(next);
    if (v[b] < half) {
      const double t = (v[a] - half) / (v[a] - v[b]);
      return axis[a] + t * (axis[b] - axis[a]);
    }
    j = next;
  }
}

double std_width(const std::vector<double>& axis, const std::vector<double>& w) {
  double sw = 0.0, sx = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sw += w[j];
    sx += w[j] * axis[j];
  }
  if (!(sw > 0.0)) throw NumericError("distribution has zero weight");
  const double mean = sx / sw;
  double var = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) var += w[j] * (axis[j] - mean) * (axis[j] - mean);
  return std::sqrt(var / sw);
}

double singular_k(const Eigen::VectorXd& s, std::vector<double>* eigenvalues, std::size_t n_modes) {
  const double total = s.squaredNorm();
  if (!(total > 0.0)) throw NumericError("amplitude matrix is zero");
  double purity = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double l = s[j] * s[j] / total;
    purity += l * l;
  }
  if (eigenvalues) {
    const std::size_t keep = n_modes == 0 ? static_cast<std::size_t>(s.size())
                                          : std::min(n_modes, static_cast<std::size_t>(s.size()));
    eigenvalues->resize(keep);
    for (std::size_t j = 0; j < keep; ++j) {
      const auto e = static_cast<Eigen::Index>(j);
      (*eigenvalues)[j] = s[e] * s[e] / total;
    }
  }
  return 1.0 / purity;
}

}  // namespace

std::string_view to_string(WidthKind kind) {
  switch (kind) {
    case WidthKind::fwhm:
      return "fwhm";
    case WidthKind::std_dev:
      return "std_dev";
    case WidthKind::amplitude_std_dev:
      return "amplitude_std_dev";
  }
  return "unknown";
}

WidthKind width_kind_from_string(std::string_view text) {
  if (text == "fwhm") return WidthKind::fwhm;
  if (text == "std_dev") return WidthKind::std_dev;
  if (text == "amplitude_std_dev") return WidthKind::amplitude_std_dev;
  throw ArgumentError("unknown width kind '" + std::string(text) + "'");
}

std::size_t principal_peak(const std::vector<double>& v) {
  if (v.empty()) throw ArgumentError("empty distribution");
  std::size_t j = v.size() / 2;
  while (true) {
    if (j + 1 < v.size() && v[j + 1] > v[j]) {
      ++j;
    } else if (j > 0 && v[j - 1] > v[j]) {
      --j;
    } else {
      return j;
    }
  }
}

double distribution_width(const std::vector<double>& axis, const std::vector<double>& v, WidthKind kind) {
  if (axis.size() != v.size() || v.size() < 3) throw ArgumentError("distribution needs >= 3 samples matching its axis");
  switch (kind) {
    case WidthKind::fwhm: {
      const std::size_t peak = principal_peak(v);
      const double half = 0.5 * v[peak];
      if (!(half > 0.0)) throw NumericError("distribution has no positive peak");
      const double width = half_crossing(axis, v, peak, half, +1) - half_crossing(axis, v, peak, half, -1);
      const double step = std::abs(axis[1] - axis[0]);
      if (width < 2.0 * step) throw ResolutionError("peak under-resolved: FWHM spans fewer than two grid steps");
      return width;
    }
    case WidthKind::std_dev:
      return std_width(axis, v);
    case WidthKind::amplitude_std_dev:
      return std::sqrt(2.0) * std_width(axis, v);
  }
  throw ArgumentError("unknown width kind");
}

std::vector<double> marginal(const JointAmplitude& amp, Party party) {
  const Eigen::MatrixXd p = amp.intensity();
  Eigen::VectorXd m;
  if (party == Party::idler) {
    m = p.rowwise().sum() * amp.step_s();
  } else {
    m = p.colwise().sum().transpose() * amp.step_i();
  }
  return {m.data(), m.data() + m.size()};
}

double marginal_width(const JointAmplitude& amp, Party party, const WidthConvention& conv) {
  const auto& axis = party == Party::idler ? amp.axis_i : amp.axis_s;
  return distribution_width(axis, marginal(amp, party), conv.kind);
}

double conditional_width(const JointAmplitude& amp, const WidthConvention& conv) {
  const auto& as = amp.axis_s;
  double col = 0.0;
  if (conv.slice_at) {
    const double t = *conv.slice_at;
    if (t < as.front() || t > as.back()) throw DomainError("conditional slice position lies outside the grid");
    col = (t - as.front()) / amp.step_s();
  } else {
    col = static_cast<double>(principal_peak(marginal(amp, Party::signal)));
  }
  const auto last = static_cast<Eigen::Index>(as.size()) - 1;
  const auto lo = std::min(static_cast<Eigen::Index>(std::floor(col)), last);
  const auto hi = std::min(lo + 1, last);
  const double w = col - static_cast<double>(lo);

  std::vector<double> slice(amp.axis_i.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    slice[i] = (1.0 - w) * std::norm(amp.values(r, lo)) + w * std::norm(amp.values(r, hi));
    peak = std::max(peak, slice[i]);
  }
  const double global = amp.intensity().maxCoeff();
  if (!(peak > 1e-14 * global) || !(peak > 0.0)) {
    throw NumericError("conditional slice is entirely below the numeric floor");
  }
  return distribution_width(amp.axis_i, slice, conv.kind);
}

FedorovRatio fedorov_ratio(const JointAmplitude& amp, const WidthConvention& conv) {
  const double r = marginal_width(amp, Party::idler, conv) / conditional_width(amp, conv);
  return {r, r * r};
}

SchmidtSpectrum schmidt_spectrum(const JointAmplitude& amp, std::size_t n_modes) {
  if (amp.values.rows() < 2 || amp.values.cols() < 2) throw ArgumentError("Schmidt decomposition needs a 2D grid");
  const double scale = std::sqrt(amp.step_i() * amp.step_s());
  Eigen::VectorXd s;
  if (amp.values.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(amp.values.real() * scale);
    if (svd.info() != Eigen::Success) {
      throw NumericError("SVD failed on " + std::to_string(amp.values.rows()) + "x" +
                         std::to_string(amp.values.cols()) + " grid");
    }
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(amp.values * scale);
    if (svd.info() != Eigen::Success) {
      throw NumericError("SVD failed on " + std::to_string(amp.values.rows()) + "x" +
                         std::to_string(amp.values.cols()) + " grid");
    }
    s = svd.singularValues();
  }
  if (!s.allFinite()) throw NumericError("SVD produced non-finite singular values");
  SchmidtSpectrum out;
  out.K = singular_k(s, &out.eigenvalues, n_modes);
  return out;
}

EntanglementReport entanglement_report(const JointAmplitude& amp, const OpticalSetup& setup,
                                       const WidthConvention& conv, std::size_t n_modes) {
  EntanglementReport rep;
  rep.convention = conv;
  rep.units = amp.domain == Domain::far_field_angle ? "deg"
              : amp.domain == Domain::far_field_wavevector ? "rad/um"
                                                           : "um";
  rep.delta_unconditional = marginal_width(amp, Party::idler, conv);
  rep.delta_conditional = conditional_width(amp, conv);
  rep.r_1d = rep.delta_unconditional / rep.delta_conditional;
  rep.r_2d = rep.r_1d * rep.r_1d;
  rep.r2d_note =
      "r_2d is R_x*R_y over both transverse axes, equal to r_1d^2 under azimuthal symmetry; "
      "estimates that do not square the one-axis ratio come out lower";
  if (amp.domain != Domain::near_field_position) {
    const auto main = schmidt_spectrum(restrict_to_main_lobe(amp, setup), n_modes);
    rep.k_main = main.K;
    rep.eigenvalues = main.eigenvalues;
    rep.k_full = schmidt_spectrum(amp, 1).K;
  } else {
    const auto full = schmidt_spectrum(amp, n_modes);
    rep.k_main = rep.k_full = full.K;
    rep.eigenvalues = full.eigenvalues;
  }
  return rep;
}

EntanglementReport entanglement_report(const OpticalSetup& setup, const AngularGrid& grid,
                                       const WidthConvention& conv, std::size_t n_modes) {
  return entanglement_report(build_joint_amplitude(setup, grid), setup, conv, n_modes);
}

std::vector<ScanRow> parameter_scan(const OpticalSetup& setup_template, const std::vector<double>& length_values,
                                    const std::vector<double>& waist_values, const AngularGrid& grid,
                                    const WidthConvention& conv, bool with_schmidt) {
  if (length_values.empty() || waist_values.empty()) throw ArgumentError("parameter scan needs non-empty lists");
  std::vector<ScanRow> rows;
  rows.reserve(length_values.size() * waist_values.size());
  for (double length : length_values) {
    for (double waist : waist_values) {
      ScanRow row;
      row.length_um = length;
      row.waist_um = waist;
      try {
        OpticalSetup s = setup_template;
        s.length_um = length;
        s.waist_um = waist;
        const auto amp = build_joint_amplitude(s, grid);
        row.delta_unconditional = marginal_width(amp, Party::idler, conv);
        row.delta_conditional = conditional_width(amp, conv);
        row.r_1d = row.delta_unconditional / row.delta_conditional;
        if (with_schmidt) row.k = schmidt_spectrum(restrict_to_main_lobe(amp, s), 1).K;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace biphoton
