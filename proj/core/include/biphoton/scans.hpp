#pragma once

#include <string_view>
#include <vector>

#include "biphoton/amplitude.hpp"
#include "biphoton/counting.hpp"

namespace biphoton {

enum class ScanKind { knife, slit, set_row };

std::string_view to_string(ScanKind kind);

// One record per position; counts are integral except `expected` (noise-free mean counts).
struct ScanResult {
  ScanKind kind = ScanKind::knife;
  std::vector<double> positions;  // deg
  std::vector<double> raw;
  std::vector<double> accidental;
  std::vector<double> corrected;  // equals raw until accidentals are subtracted
  std::vector<double> expected;
  bool accidentals_subtracted = false;
  CountingConfig counting;

  std::size_t size() const { return positions.size(); }
};

// corrected = raw - accidental, unclamped. Throws StateError if already applied.
ScanResult subtract_accidentals(const ScanResult& result);

// Poisson realization of the expected pair rates (one RNG stream per position index).
ScanResult simulate_scan(ScanKind kind, const std::vector<double>& positions, const std::vector<double>& rates_hz,
                         const CountingConfig& counting);

// Noise-free record: raw and accidental at their means, accidentals already removed.
ScanResult expected_scan(ScanKind kind, const std::vector<double>& positions, const std::vector<double>& rates_hz,
                         const CountingConfig& counting);

// Knife-edge transmission of the azimuthally extended two-photon intensity. A knife opened
// to angle theta_k passes both photons when |k_x| <= k0 sin(theta_k) on each; the fraction of
// azimuths satisfying this is evaluated in closed form. Transmission is 1 fully open and 0 at
// theta_k <= 0.
class KnifeModel {
 public:
  // Parametric in crystal length; other setup values are fixed.
  KnifeModel(const OpticalSetup& setup, const AngularGrid& grid);
  // Fixed amplitude on a symmetric angle grid.
  explicit KnifeModel(const JointAmplitude& amp);

  std::vector<double> transmission(const std::vector<double>& knife_deg) const;
  std::vector<double> transmission(const std::vector<double>& knife_deg, double length_um) const;
  double theta_max_deg() const { return theta_max_deg_; }

 private:
  struct Cell {
    int level;
    double weight;  // pump factor squared times geometric weight
    double half_phase_per_um;  // dk_par / 2
  };

  std::vector<double> level_weights(double length_um) const;
  std::vector<double> apply(const std::vector<double>& knife_deg, const std::vector<double>& weights) const;

  std::vector<double> level_sin_;  // max(|sin theta_i|, |sin theta_s|) for each level
  std::vector<Cell> cells_;
  std::vector<double> fixed_weights_;
  int exponent_ = 1;
  double theta_max_deg_ = 0.0;
};

ScanResult knife_edge_scan(const JointAmplitude& amp, const std::vector<double>& knife_deg,
                           const CountingConfig& counting);

// Fraction of the two-photon probability passing a slit of full width `width_deg` centred at
// `center_deg` in front of both photons (lab angles; the idler axis is mirrored).
std::vector<double> slit_transmission(const JointAmplitude& amp, const std::vector<double>& centers_deg,
                                      double width_deg);

ScanResult slit_scan(const JointAmplitude& amp, const std::vector<double>& centers_deg, double width_deg,
                     const CountingConfig& counting);

struct SetScanConfig {
  std::vector<double> seed_angles_deg;
  AngularGrid camera{10.0, 201};
  double mask_from_deg = 0.0;  // blocked seed interval; empty when from == to
  double mask_to_deg = 0.0;
  double gain = 1.0;

  void validate() const;
  bool masked(double seed_deg) const;
};

// Rows follow the seed angles, columns the camera axis; masked rows are zero and flagged.
struct SetReconstruction {
  std::vector<double> seed_angles_deg;
  std::vector<double> camera_deg;
  Eigen::MatrixXd intensity;
  std::vector<bool> missing;

  // Amplitude sqrt(intensity), normalized, for use with the width metrics.
  JointAmplitude to_amplitude() const;
};

// Each unmasked row is gain * |F(theta_seed, theta_s)|^2 interpolated from `amp`.
// With `noise`, each row is a Poisson photon count scaled so the amplitude maximum maps to
// pair_rate_open * T counts, then mapped back to intensity units.
SetReconstruction set_scan(const JointAmplitude& amp, const SetScanConfig& cfg, const CountingConfig* noise = nullptr);

struct EfficiencyConfig {
  double detector_qe = 1.0;
  double filter_transmission = 1.0;
  double fresnel_loss = 0.0;
  double coupling = 1.0;

  void validate() const;
};

struct EfficiencyBudget {
  double per_photon = 1.0;
  double pair = 1.0;
};

EfficiencyBudget efficiency_budget(const EfficiencyConfig& cfg);

}  // namespace biphoton
