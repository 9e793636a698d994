#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "biphoton/scans.hpp"

namespace biphoton {

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd parameters;
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;  // weighted, sqrt(chi^2)
  double gradient_norm = 0.0;  // max_j |J_j . r| / (|J_j| |r|)
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<std::string> warnings;
  std::vector<double> cost_history;  // chi^2 after each accepted step

  double value(std::string_view name) const;
  double sigma(std::string_view name) const;
};

struct LevenbergMarquardtOptions {
  int max_iterations = 200;
  double parameter_tolerance = 1e-10;
  double gradient_tolerance = 1e-10;
};

// Minimizes |r(p)|^2. `residuals` returns r; `jacobian` returns dr/dp.
FitResult levenberg_marquardt(std::vector<std::string> names, Eigen::VectorXd start,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
                              const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                              const LevenbergMarquardtOptions& options = {});

// A exp(-(x - x0)^2 / (2 w^2)) + b, Poisson weights. Parameters: amplitude, center, width, offset.
FitResult fit_gaussian(const ScanResult& data);

// scale * knife_transmission(x; L) + baseline. Parameters: effective_L, scale, baseline.
// The prior supplies all fixed optics and centres a coarse length scan (0.5x to 1.5x) that
// seeds the optimizer; `grid` fixes the integrator.
FitResult fit_knife_profile(const ScanResult& data, const OpticalSetup& prior, const AngularGrid& grid);
FitResult fit_knife_profile(const ScanResult& data, const OpticalSetup& prior, const KnifeModel& model);

}  // namespace biphoton
