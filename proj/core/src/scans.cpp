#include "biphoton/scans.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require_angle_domain(const JointAmplitude& amp) {
  if (amp.domain != Domain::far_field_angle) throw ArgumentError("scan simulation needs a far-field angle amplitude");
}

void require_inside(const std::vector<double>& positions, double lo, double hi, const char* what) {
  for (double p : positions) {
    if (!(p >= lo - 1e-12 && p <= hi + 1e-12)) {
      throw DomainError(std::string(what) + " position " + std::to_string(p) + " deg lies outside the grid");
    }
  }
}

// Fraction of the azimuthal circle on which |sin(theta) cos(phi)| <= sin(theta_k).
double azimuthal_pass(double sin_knife, double sin_level) {
  if (sin_level <= 0.0) return 1.0;
  const double c = sin_knife / sin_level;
  if (c >= 1.0) return 1.0;
  return 1.0 - (2.0 / std::numbers::pi) * std::acos(c);
}

double geometric_weight(double theta_i_deg, double theta_s_deg) {
  const double ti = theta_i_deg * kDeg;
  const double ts = theta_s_deg * kDeg;
  return std::sqrt(std::abs(std::sin(ti) * std::sin(ts))) * std::cos(ti) * std::cos(ts);
}

// Overlap of each grid cell with [center - width/2, center + width/2], as a fraction of the cell.
std::vector<double> coverage(const std::vector<double>& axis, double step, double center, double width, bool mirrored) {
  std::vector<double> c(axis.size());
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const double x = mirrored ? -axis[j] : axis[j];
    const double overlap = std::min(hi, x + 0.5 * step) - std::max(lo, x - 0.5 * step);
    c[j] = std::clamp(overlap / step, 0.0, 1.0);
  }
  return c;
}

double interpolate_index(const std::vector<double>& axis, double x) {
  const double h = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  return (x - axis.front()) / h;
}

}  // namespace

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::knife:
      return "knife";
    case ScanKind::slit:
      return "slit";
    case ScanKind::set_row:
      return "set_row";
  }
  return "unknown";
}

ScanResult subtract_accidentals(const ScanResult& result) {
  if (result.accidentals_subtracted) throw StateError("accidentals have already been subtracted from this scan");
  if (result.raw.size() != result.size() || result.accidental.size() != result.size()) {
    throw ArgumentError("scan needs raw and accidental counts for every position");
  }
  ScanResult out = result;
  out.corrected.resize(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) out.corrected[j] = out.raw[j] - out.accidental[j];
  out.accidentals_subtracted = true;
  return out;
}

ScanResult simulate_scan(ScanKind kind, const std::vector<double>& positions, const std::vector<double>& rates_hz,
                         const CountingConfig& counting) {
  if (positions.size() != rates_hz.size()) throw ArgumentError("positions and rates differ in length");
  counting.validate();
  ScanResult r;
  r.kind = kind;
  r.positions = positions;
  r.counting = counting;
  const double acc = counting.accidental_rate() * counting.acquisition_time_s;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const auto c = simulate_counts(rates_hz[j], counting, j);
    r.raw.push_back(static_cast<double>(c.raw));
    r.accidental.push_back(static_cast<double>(c.accidental));
    r.expected.push_back(rates_hz[j] * counting.acquisition_time_s + acc);
  }
  r.corrected = r.raw;
  return r;
}

ScanResult expected_scan(ScanKind kind, const std::vector<double>& positions, const std::vector<double>& rates_hz,
                         const CountingConfig& counting) {
  if (positions.size() != rates_hz.size()) throw ArgumentError("positions and rates differ in length");
  counting.validate();
  ScanResult r;
  r.kind = kind;
  r.positions = positions;
  r.counting = counting;
  const double acc = counting.accidental_rate() * counting.acquisition_time_s;
  for (double rate : rates_hz) {
    r.raw.push_back(rate * counting.acquisition_time_s + acc);
    r.accidental.push_back(acc);
    r.corrected.push_back(rate * counting.acquisition_time_s);
    r.expected.push_back(r.raw.back());
  }
  r.accidentals_subtracted = true;
  return r;
}

KnifeModel::KnifeModel(const OpticalSetup& setup, const AngularGrid& grid) {
  setup.validate();
  grid.validate();
  theta_max_deg_ = grid.theta_max_deg;
  exponent_ = setup.phasematch_exponent;
  const auto axis = grid.axis();
  const int n = grid.n;
  const int centre = n / 2;
  const auto k = wavenumbers(setup);
  const double sigma = setup.pump_amplitude_std_um();

  std::vector<double> qi(axis.size()), qs(axis.size()), kzi(axis.size()), kzs(axis.size());
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const double t = axis[j] * kDeg;
    qi[j] = k.idler_axis * std::sin(t);
    qs[j] = k.signal_axis * std::sin(t);
    kzi[j] = setup.refraction ? std::sqrt(k.idler * k.idler - qi[j] * qi[j]) : k.idler * std::cos(t);
    kzs[j] = setup.refraction ? std::sqrt(k.signal * k.signal - qs[j] * qs[j]) : k.signal * std::cos(t);
  }

  level_sin_.resize(static_cast<std::size_t>(centre + 1));
  for (int m = 0; m <= centre; ++m) level_sin_[static_cast<std::size_t>(m)] = std::sin(axis[static_cast<std::size_t>(centre + m)] * kDeg);

  constexpr double kPumpFloor = 1e-16;
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const auto su = static_cast<std::size_t>(s);
      const double fp = pump_envelope(qs[su] - qi[iu], sigma);
      const double pump2 = fp * fp;
      if (pump2 < kPumpFloor) continue;
      const double w = pump2 * geometric_weight(axis[iu], axis[su]);
      if (w <= 0.0) continue;
      const double dk = k.pump - (kzs[su] + kzi[iu]) - k.grating;
      cells_.push_back({std::max(std::abs(i - centre), std::abs(s - centre)), w, 0.5 * dk});
    }
  }
}

KnifeModel::KnifeModel(const JointAmplitude& amp) {
  require_angle_domain(amp);
  const auto n = static_cast<int>(amp.axis_s.size());
  if (amp.axis_i != amp.axis_s || n % 2 == 0 || std::abs(amp.axis_s.front() + amp.axis_s.back()) > 1e-12) {
    throw ArgumentError("knife model needs a symmetric odd grid shared by both photons");
  }
  theta_max_deg_ = amp.axis_s.back();
  const int centre = n / 2;
  level_sin_.resize(static_cast<std::size_t>(centre + 1));
  for (int m = 0; m <= centre; ++m) {
    level_sin_[static_cast<std::size_t>(m)] = std::sin(amp.axis_s[static_cast<std::size_t>(centre + m)] * kDeg);
  }
  fixed_weights_.assign(level_sin_.size(), 0.0);
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < n; ++i) {
      const int m = std::max(std::abs(i - centre), std::abs(s - centre));
      fixed_weights_[static_cast<std::size_t>(m)] +=
          std::norm(amp.values(i, s)) *
          geometric_weight(amp.axis_i[static_cast<std::size_t>(i)], amp.axis_s[static_cast<std::size_t>(s)]);
    }
  }
}

std::vector<double> KnifeModel::level_weights(double length_um) const {
  if (!(length_um > 0.0)) throw ArgumentError("crystal length must be > 0");
  std::vector<double> w(level_sin_.size(), 0.0);
  for (const auto& c : cells_) {
    double pm = sinc(c.half_phase_per_um * length_um);
    pm *= pm;
    if (exponent_ == 2) pm *= pm;
    w[static_cast<std::size_t>(c.level)] += c.weight * pm;
  }
  return w;
}

std::vector<double> KnifeModel::apply(const std::vector<double>& knife_deg, const std::vector<double>& weights) const {
  require_inside(knife_deg, -theta_max_deg_, theta_max_deg_, "knife");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw NumericError("knife model has no transmitted probability");
  std::vector<double> out;
  out.reserve(knife_deg.size());
  for (double tk : knife_deg) {
    if (tk <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    const double sk = std::sin(tk * kDeg);
    double acc = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m) acc += weights[m] * azimuthal_pass(sk, level_sin_[m]);
    out.push_back(acc / total);
  }
  return out;
}

std::vector<double> KnifeModel::transmission(const std::vector<double>& knife_deg) const {
  if (fixed_weights_.empty()) throw StateError("parametric knife model needs a crystal length");
  return apply(knife_deg, fixed_weights_);
}

std::vector<double> KnifeModel::transmission(const std::vector<double>& knife_deg, double length_um) const {
  if (!fixed_weights_.empty()) throw StateError("knife model built from a fixed amplitude has no length parameter");
  return apply(knife_deg, level_weights(length_um));
}

ScanResult knife_edge_scan(const JointAmplitude& amp, const std::vector<double>& knife_deg,
                           const CountingConfig& counting) {
  const auto t = KnifeModel(amp).transmission(knife_deg);
  std::vector<double> rates(t.size());
  std::transform(t.begin(), t.end(), rates.begin(), [&](double x) { return x * counting.pair_rate_open_hz; });
  return simulate_scan(ScanKind::knife, knife_deg, rates, counting);
}

std::vector<double> slit_transmission(const JointAmplitude& amp, const std::vector<double>& centers_deg,
                                      double width_deg) {
  require_angle_domain(amp);
  const double hs = amp.step_s();
  const double hi = amp.step_i();
  if (!(width_deg >= 2.0 * std::max(hs, hi) * (1.0 - 1e-12))) {
    throw ResolutionError("slit width must span at least two grid steps");
  }
  require_inside(centers_deg, std::max(amp.axis_s.front(), -amp.axis_i.back()),
                 std::min(amp.axis_s.back(), -amp.axis_i.front()), "slit");
  const Eigen::MatrixXd p = amp.intensity() * (hi * hs);
  std::vector<double> out;
  out.reserve(centers_deg.size());
  for (double c : centers_deg) {
    const auto ci = coverage(amp.axis_i, hi, c, width_deg, true);
    const auto cs = coverage(amp.axis_s, hs, c, width_deg, false);
    const Eigen::Map<const Eigen::VectorXd> vi(ci.data(), static_cast<Eigen::Index>(ci.size()));
    const Eigen::Map<const Eigen::VectorXd> vs(cs.data(), static_cast<Eigen::Index>(cs.size()));
    out.push_back(vi.dot(p * vs));
  }
  return out;
}

ScanResult slit_scan(const JointAmplitude& amp, const std::vector<double>& centers_deg, double width_deg,
                     const CountingConfig& counting) {
  const auto t = slit_transmission(amp, centers_deg, width_deg);
  std::vector<double> rates(t.size());
  std::transform(t.begin(), t.end(), rates.begin(), [&](double x) { return x * counting.pair_rate_open_hz; });
  return simulate_scan(ScanKind::slit, centers_deg, rates, counting);
}

void SetScanConfig::validate() const {
  if (seed_angles_deg.empty()) throw ArgumentError("SET scan needs at least one seed angle");
  if (!std::is_sorted(seed_angles_deg.begin(), seed_angles_deg.end())) throw ArgumentError("seed angles must be sorted");
  camera.validate();
  if (mask_from_deg > mask_to_deg) throw ArgumentError("mask interval must satisfy from <= to");
  if (!(gain > 0.0)) throw ArgumentError("SET gain must be > 0");
}

bool SetScanConfig::masked(double seed_deg) const {
  return mask_from_deg < mask_to_deg && seed_deg >= mask_from_deg && seed_deg <= mask_to_deg;
}

JointAmplitude SetReconstruction::to_amplitude() const {
  return make_amplitude(Domain::far_field_angle, seed_angles_deg, camera_deg,
                        intensity.cwiseMax(0.0).cwiseSqrt().cast<std::complex<double>>());
}

SetReconstruction set_scan(const JointAmplitude& amp, const SetScanConfig& cfg, const CountingConfig* noise) {
  require_angle_domain(amp);
  cfg.validate();
  require_inside(cfg.seed_angles_deg, amp.axis_i.front(), amp.axis_i.back(), "seed");
  require_inside({-cfg.camera.theta_max_deg, cfg.camera.theta_max_deg}, amp.axis_s.front(), amp.axis_s.back(),
                 "camera");
  if (cfg.mask_from_deg < cfg.mask_to_deg) {
    require_inside({cfg.mask_from_deg, cfg.mask_to_deg}, amp.axis_i.front(), amp.axis_i.back(), "mask");
  }

  const Eigen::MatrixXd tpi = amp.intensity();
  const auto last_i = static_cast<Eigen::Index>(amp.axis_i.size()) - 1;
  const auto last_s = static_cast<Eigen::Index>(amp.axis_s.size()) - 1;
  auto bracket = [](double f, Eigen::Index last) {
    f = std::clamp(f, 0.0, static_cast<double>(last));
    const auto lo = std::min(static_cast<Eigen::Index>(std::floor(f)), last - 1);
    return std::pair{lo, f - static_cast<double>(lo)};
  };

  SetReconstruction rec;
  rec.seed_angles_deg = cfg.seed_angles_deg;
  rec.camera_deg = cfg.camera.axis();
  const auto rows = static_cast<Eigen::Index>(rec.seed_angles_deg.size());
  const auto cols = static_cast<Eigen::Index>(rec.camera_deg.size());
  rec.intensity = Eigen::MatrixXd::Zero(rows, cols);
  rec.missing.assign(rec.seed_angles_deg.size(), false);

  std::vector<std::pair<Eigen::Index, double>> col_at(rec.camera_deg.size());
  for (std::size_t c = 0; c < col_at.size(); ++c) {
    col_at[c] = bracket(interpolate_index(amp.axis_s, rec.camera_deg[c]), last_s);
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double seed = rec.seed_angles_deg[static_cast<std::size_t>(r)];
    if (cfg.masked(seed)) {
      rec.missing[static_cast<std::size_t>(r)] = true;
      continue;
    }
    const auto [i0, wi] = bracket(interpolate_index(amp.axis_i, seed), last_i);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto [s0, ws] = col_at[static_cast<std::size_t>(c)];
      const double v = (1 - wi) * ((1 - ws) * tpi(i0, s0) + ws * tpi(i0, s0 + 1)) +
                       wi * ((1 - ws) * tpi(i0 + 1, s0) + ws * tpi(i0 + 1, s0 + 1));
      rec.intensity(r, c) = cfg.gain * v;
    }
  }

  if (noise) {
    noise->validate();
    const double peak = cfg.gain * tpi.maxCoeff();
    const double photons = noise->pair_rate_open_hz * noise->acquisition_time_s;
    if (!(photons > 0.0)) throw ArgumentError("SET noise needs pair_rate_open_hz * acquisition_time_s > 0");
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (rec.missing[static_cast<std::size_t>(r)]) continue;
      auto rng = make_stream(noise->rng_seed, static_cast<std::uint64_t>(r));
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double mean = rec.intensity(r, c) / peak * photons;
        rec.intensity(r, c) = static_cast<double>(poisson(mean, rng)) * peak / photons;
      }
    }
  }
  return rec;
}

void EfficiencyConfig::validate() const {
  for (double v : {detector_qe, filter_transmission, fresnel_loss, coupling}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("efficiency factors must lie in [0, 1]");
  }
}

EfficiencyBudget efficiency_budget(const EfficiencyConfig& cfg) {
  cfg.validate();
  EfficiencyBudget b;
  b.per_photon = cfg.detector_qe * cfg.filter_transmission * (1.0 - cfg.fresnel_loss) * cfg.coupling;
  b.pair = b.per_photon * b.per_photon;
  return b;
}

}  // namespace biphoton
