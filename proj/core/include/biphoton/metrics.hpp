#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biphoton/amplitude.hpp"

namespace biphoton {

// fwhm: full width at half maximum of the principal (central) peak, linear interpolation;
// a peak narrower than two grid steps raises ResolutionError.
// std_dev: standard deviation of the distribution.
// amplitude_std_dev: sqrt(2) * std_dev, the std of the Gaussian amplitude whose intensity has
// this second moment; equals sigma for exp(-x^2/sigma^2).
enum class WidthKind { fwhm, std_dev, amplitude_std_dev };

std::string_view to_string(WidthKind kind);
WidthKind width_kind_from_string(std::string_view text);

struct WidthConvention {
  WidthKind kind = WidthKind::fwhm;
  // Unset: slice at the signal marginal's principal peak.
  std::optional<double> slice_at;
};

enum class Party { signal, idler };

// Width of a sampled non-negative distribution on a uniform axis.
double distribution_width(const std::vector<double>& axis, const std::vector<double>& values, WidthKind kind);

// Index of the local maximum reached by climbing from the centre sample.
std::size_t principal_peak(const std::vector<double>& values);

std::vector<double> marginal(const JointAmplitude& amp, Party party);
double marginal_width(const JointAmplitude& amp, Party party, const WidthConvention& conv);

// Width along the idler axis of |F(., theta_s*)|^2.
double conditional_width(const JointAmplitude& amp, const WidthConvention& conv);

struct FedorovRatio {
  double r_1d = 0.0;
  double r_2d = 0.0;  // R_x * R_y over the two transverse axes; equals r_1d^2 under azimuthal symmetry
};

FedorovRatio fedorov_ratio(const JointAmplitude& amp, const WidthConvention& conv);

struct SchmidtSpectrum {
  std::vector<double> eigenvalues;  // descending, truncated to the requested count
  double K = 1.0;
};

// n_modes = 0 keeps every eigenvalue.
SchmidtSpectrum schmidt_spectrum(const JointAmplitude& amp, std::size_t n_modes = 0);

struct EntanglementReport {
  double delta_unconditional = 0.0;
  double delta_conditional = 0.0;
  double r_1d = 0.0;
  double r_2d = 0.0;
  double k_main = 0.0;  // main phase-matching lobe only
  double k_full = 0.0;
  WidthConvention convention;
  std::string units;
  std::string r2d_note;
  std::vector<double> eigenvalues;  // leading main-lobe eigenvalues
};

EntanglementReport entanglement_report(const JointAmplitude& amp, const OpticalSetup& setup,
                                       const WidthConvention& conv, std::size_t n_modes = 32);
EntanglementReport entanglement_report(const OpticalSetup& setup, const AngularGrid& grid,
                                       const WidthConvention& conv, std::size_t n_modes = 32);

struct ScanRow {
  double length_um = 0.0;
  double waist_um = 0.0;
  double delta_unconditional = 0.0;
  double delta_conditional = 0.0;
  double r_1d = 0.0;
  double k = 0.0;  // 0 when not requested
  std::string error;  // empty on success
};

// L-major over the two lists. A failing cell records its error and the scan continues.
std::vector<ScanRow> parameter_scan(const OpticalSetup& setup_template, const std::vector<double>& length_values,
                                    const std::vector<double>& waist_values, const AngularGrid& grid,
                                    const WidthConvention& conv, bool with_schmidt = true);

}  // namespace biphoton
