#include "biphoton/setup.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "biphoton/error.hpp"

namespace biphoton {

void OpticalSetup::validate() const {
  if (!(length_um > 0.0) || !std::isfinite(length_um)) throw ArgumentError("crystal length must be > 0");
  if (!(waist_um > 0.0) || !std::isfinite(waist_um)) throw ArgumentError("pump waist must be > 0");
  if (!(pump_nm > 0.0) || !(signal_nm > 0.0) || !(idler_nm > 0.0)) {
    throw ArgumentError("wavelengths must be > 0");
  }
  if (!(signal_nm > pump_nm)) throw ArgumentError("signal wavelength must exceed pump wavelength");
  const double lhs = 1.0 / pump_nm;
  const double rhs = 1.0 / signal_nm + 1.0 / idler_nm;
  if (std::abs(lhs - rhs) > 1e-4 * lhs) {
    throw ArgumentError("energy conservation 1/pump = 1/signal + 1/idler violated");
  }
  if (phasematch_exponent != 1 && phasematch_exponent != 2) {
    throw ArgumentError("phasematch_exponent must be 1 or 2");
  }
  // Evaluate the dispersion model at every wave: surfaces domain errors early.
  (void)wavenumbers(*this);
}

double OpticalSetup::conserving_idler_nm() const { return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm); }

double OpticalSetup::effective_idler_nm() const {
  const double exact = conserving_idler_nm();
  return std::abs(idler_nm - exact) <= 1e-9 * exact ? idler_nm : exact;
}

double OpticalSetup::pump_amplitude_std_um() const {
  return waist_convention == WaistConvention::std_dev ? waist_um : waist_um / std::numbers::sqrt2;
}

Wavenumbers wavenumbers(const OpticalSetup& setup) {
  Wavenumbers k;
  const double idler_nm = setup.effective_idler_nm();
  k.pump = wavevector(setup.pump_nm, setup.index_model);
  k.signal = wavevector(setup.signal_nm, setup.index_model);
  k.idler = wavevector(idler_nm, setup.index_model);
  if (setup.refraction) {
    k.signal_axis = 2.0 * std::numbers::pi / (setup.signal_nm * 1e-3);
    k.idler_axis = 2.0 * std::numbers::pi / (idler_nm * 1e-3);
  } else {
    k.signal_axis = k.signal;
    k.idler_axis = k.idler;
  }
  k.grating = setup.phase_matching == PhaseMatching::collinear ? k.pump - (k.signal + k.idler) : 0.0;
  return k;
}

void AngularGrid::validate() const {
  if (n < 3 || n % 2 == 0) throw ArgumentError("angular grid needs an odd number of points >= 3");
  if (!(theta_max_deg > 0.0) || !(theta_max_deg < 90.0)) {
    throw ArgumentError("angular grid theta_max must lie in (0, 90) deg");
  }
}

std::vector<double> AngularGrid::axis() const {
  validate();
  std::vector<double> a(static_cast<std::size_t>(n));
  const int c = (n - 1) / 2;
  const double h = step();
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = (j - c) * h;
  a[static_cast<std::size_t>(n - 1)] = theta_max_deg;
  a[0] = -theta_max_deg;
  return a;
}

double AngularGrid::step() const { return 2.0 * theta_max_deg / (n - 1); }

void WavevectorGrid::validate() const {
  if (n < 3 || n % 2 == 0) throw ArgumentError("wavevector grid needs an odd number of points >= 3");
  if (!(q_max > 0.0) || !std::isfinite(q_max)) throw ArgumentError("wavevector grid q_max must be > 0");
}

std::vector<double> WavevectorGrid::axis() const {
  validate();
  std::vector<double> a(static_cast<std::size_t>(n));
  const int c = (n - 1) / 2;
  const double h = step();
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = (j - c) * h;
  return a;
}

double WavevectorGrid::step() const { return 2.0 * q_max / (n - 1); }

WavevectorGrid propagating_wavevector_grid(const OpticalSetup& setup, int n, double margin) {
  const auto k = wavenumbers(setup);
  return WavevectorGrid{margin * std::max(k.signal, k.idler), n};
}

}  // namespace biphoton
