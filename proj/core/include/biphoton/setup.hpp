#pragma once

#include <vector>

#include "biphoton/dispersion.hpp"

namespace biphoton {

// How `waist_um` is read: the standard deviation of the pump amplitude profile,
// or the 1/e^2 intensity radius w (amplitude std = w / sqrt 2).
enum class WaistConvention { std_dev, beam_radius };

// none: bare crystal. collinear: a grating vector that cancels the collinear
// longitudinal mismatch (quasi-phase-matching).
enum class PhaseMatching { none, collinear };

struct OpticalSetup {
  double length_um = 6.7;
  double waist_um = 60.0;
  WaistConvention waist_convention = WaistConvention::std_dev;
  double pump_nm = 532.0;
  double signal_nm = 797.0;
  double idler_nm = 1600.0;
  IndexModel index_model = IndexModel::constant(1.0);
  // Angles are external; the transverse wavevector q = k0 sin(theta) is conserved
  // across the exit face. When false, angles are taken as internal: q = k sin(theta).
  bool refraction = true;
  PhaseMatching phase_matching = PhaseMatching::none;
  int phasematch_exponent = 1;  // 1: sinc is the amplitude; 2: literal sinc^2 reading

  // Throws ArgumentError / DomainError. Energy conservation must hold to 1e-4 relative
  // for the supplied wavelengths; the idler actually used is the exact energy-conserving one.
  void validate() const;

  // Idler wavelength satisfying 1/pump = 1/signal + 1/idler exactly.
  double conserving_idler_nm() const;
  // Supplied idler if it conserves energy to 1e-9 relative, else the conserving value.
  double effective_idler_nm() const;
  // Std of the pump amplitude profile, i.e. sigma in exp(-dk^2 sigma^2 / 2).
  double pump_amplitude_std_um() const;
};

// Per-wave wavenumbers in rad/um.
struct Wavenumbers {
  double pump = 0.0;
  double signal = 0.0;  // in crystal
  double idler = 0.0;
  double signal_axis = 0.0;  // converts an angle axis to q: vacuum k with refraction, else crystal k
  double idler_axis = 0.0;
  double grating = 0.0;  // subtracted from dk_par
};

Wavenumbers wavenumbers(const OpticalSetup& setup);

// Symmetric angle axis, uniformly spaced in [-theta_max, theta_max]; n odd so 0 is a sample.
struct AngularGrid {
  double theta_max_deg = 35.0;
  int n = 1025;

  void validate() const;
  std::vector<double> axis() const;
  double step() const;
};

// Symmetric transverse-wavevector axis in rad/um; n odd.
struct WavevectorGrid {
  double q_max = 8.0;
  int n = 2049;

  void validate() const;
  std::vector<double> axis() const;
  double step() const;
};

// Wavevector grid spanning every propagating idler and signal component inside the crystal,
// widened by `margin` (zero padding that refines the sampling of the conjugate position axis).
WavevectorGrid propagating_wavevector_grid(const OpticalSetup& setup, int n, double margin = 1.0);

}  // namespace biphoton
