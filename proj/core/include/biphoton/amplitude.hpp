#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "biphoton/setup.hpp"

namespace biphoton {

enum class Domain { far_field_angle, far_field_wavevector, near_field_position };

std::string_view to_string(Domain domain);

// Complex two-photon amplitude F on a rectangular grid. Rows follow the idler
// axis, columns the signal axis. Axes are uniformly spaced (deg, rad/um or um).
//
// The idler angle is measured on the opposite side of the pump axis from the
// signal, so the correlation stripe runs along theta_i = theta_s for degenerate
// wavelengths.
struct JointAmplitude {
  Domain domain = Domain::far_field_angle;
  std::vector<double> axis_i;
  std::vector<double> axis_s;
  Eigen::MatrixXcd values;
  // C: the factor applied to the raw amplitude to reach unit probability.
  double norm_constant = 1.0;
  // q = k sin(theta) for angle axes (rad/um); crystal wavenumbers for wavevector axes.
  double wavenumber_i = 0.0;
  double wavenumber_s = 0.0;

  double step_i() const;
  double step_s() const;
  Eigen::MatrixXd intensity() const;
  // sum |F|^2 * step_i * step_s
  double total_probability() const;
};

// Scales `values` to unit total probability and records C. Throws NumericError if all zero.
JointAmplitude make_amplitude(Domain domain, std::vector<double> axis_i, std::vector<double> axis_s,
                              Eigen::MatrixXcd values, double wavenumber_i = 0.0, double wavenumber_s = 0.0);

struct MismatchPair {
  double dk_perp = 0.0;  // rad/um
  double dk_par = 0.0;   // rad/um
};

// dk_perp = q_s - q_i, dk_par = k_p - kz_s - kz_i (minus any grating vector).
// Throws DomainError for |theta| >= 90 deg.
MismatchPair mismatch(double theta_i_deg, double theta_s_deg, const OpticalSetup& setup);

// sin(x)/x, with a series near 0.
double sinc(double x);

// exp(-dk^2 sigma^2 / 2); sigma is the pump amplitude std in um.
double pump_envelope(double dk_perp, double sigma_um);

// sinc(dk L / 2)
double phase_matching(double dk_par, double length_um);

JointAmplitude build_joint_amplitude(const OpticalSetup& setup, const AngularGrid& grid);

// Components outside the propagating range inside the crystal are zero.
JointAmplitude build_joint_amplitude(const OpticalSetup& setup, const WavevectorGrid& grid);

// Keeps only the cells inside the main phase-matching lobe (|dk_par| L / 2 below the
// first sinc zero beyond the grid minimum) and renormalizes.
JointAmplitude restrict_to_main_lobe(const JointAmplitude& amp, const OpticalSetup& setup);

}  // namespace biphoton
