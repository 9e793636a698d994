#include "biphoton/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

struct Observations {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd inv_sigma;
};

Observations observations(const ScanResult& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  if (data.corrected.size() != data.size() || data.raw.size() != data.size()) {
    throw ArgumentError("scan data has inconsistent record lengths");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return data.positions[a] < data.positions[b]; });
  Observations o{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto j = order[static_cast<std::size_t>(k)];
    o.x[k] = data.positions[j];
    o.y[k] = data.corrected[j];
    double var = data.raw[j];
    if (data.accidentals_subtracted && data.accidental.size() == data.size()) var += data.accidental[j];
    o.inv_sigma[k] = 1.0 / std::sqrt(std::max(var, 1.0));
  }
  return o;
}

double scaled_gradient(const Eigen::MatrixXd& J, const Eigen::VectorXd& r) {
  const double rn = r.norm();
  if (rn == 0.0) return 0.0;
  double g = 0.0;
  for (Eigen::Index j = 0; j < J.cols(); ++j) {
    const double cn = J.col(j).norm();
    if (cn > 0.0) g = std::max(g, std::abs(J.col(j).dot(r)) / (cn * rn));
  }
  return g;
}

FitResult not_converged(std::vector<std::string> names, Eigen::VectorXd p, std::string message) {
  FitResult f;
  f.names = std::move(names);
  f.covariance = Eigen::MatrixXd::Constant(p.size(), p.size(), std::numeric_limits<double>::quiet_NaN());
  f.parameters = std::move(p);
  f.message = std::move(message);
  return f;
}

}  // namespace

double FitResult::value(std::string_view name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return parameters[static_cast<Eigen::Index>(j)];
  }
  throw ArgumentError("no fit parameter named '" + std::string(name) + "'");
}

double FitResult::sigma(std::string_view name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto e = static_cast<Eigen::Index>(j);
    if (names[j] == name) return std::sqrt(std::max(covariance(e, e), 0.0));
  }
  throw ArgumentError("no fit parameter named '" + std::string(name) + "'");
}

FitResult levenberg_marquardt(std::vector<std::string> names, Eigen::VectorXd p,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
                              const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                              const LevenbergMarquardtOptions& options) {
  FitResult f;
  f.names = std::move(names);
  Eigen::VectorXd r = residuals(p);
  if (!r.allFinite()) return not_converged(std::move(f.names), p, "non-finite residuals at the starting point");
  double cost = r.squaredNorm();
  Eigen::MatrixXd J = jacobian(p);
  double lambda = 1e-3;
  f.cost_history.push_back(cost);

  for (f.iterations = 0; f.iterations < options.max_iterations; ++f.iterations) {
    f.gradient_norm = scaled_gradient(J, r);
    if (f.gradient_norm < options.gradient_tolerance) {
      f.converged = true;
      f.message = "gradient below tolerance";
      break;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    Eigen::VectorXd step;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = A;
      damped.diagonal() += lambda * A.diagonal().cwiseMax(1e-300);
      step = damped.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd rt = residuals(trial);
      const double ct = rt.allFinite() ? rt.squaredNorm() : std::numeric_limits<double>::infinity();
      if (ct < cost) {
        p = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      f.converged = f.gradient_norm < 1e-6;
      f.message = f.converged ? "no further decrease possible at machine precision" : "damping limit reached";
      break;
    }
    f.cost_history.push_back(cost);
    J = jacobian(p);
    const double rel = step.norm() / (p.norm() + 1e-300);
    if (rel < options.parameter_tolerance) {
      f.converged = true;
      f.message = "relative parameter change below tolerance";
      f.gradient_norm = scaled_gradient(J, r);
      ++f.iterations;
      break;
    }
  }
  if (!f.converged && f.message.empty()) f.message = "iteration cap reached";

  f.parameters = p;
  f.residual_norm = std::sqrt(cost);
  const Eigen::MatrixXd A = J.transpose() * J;
  Eigen::MatrixXd cov = A.completeOrthogonalDecomposition().pseudoInverse();
  f.covariance = 0.5 * (cov + cov.transpose());
  return f;
}

FitResult fit_gaussian(const ScanResult& data) {
  std::vector<std::string> names{"amplitude", "center", "width", "offset"};
  if (data.size() < 5) throw ArgumentError("Gaussian fit needs at least 5 data points");
  const auto o = observations(data);
  const double lo = o.y.minCoeff();
  const double hi = o.y.maxCoeff();
  Eigen::VectorXd p(4);
  if (!(hi > lo)) {
    p << 0.0, 0.0, 0.0, lo;
    return not_converged(std::move(names), p, "degenerate data: all counts equal");
  }
  const Eigen::VectorXd w = (o.y.array() - lo).matrix();
  const double mean = w.dot(o.x) / w.sum();
  const double var = w.dot((o.x.array() - mean).square().matrix()) / w.sum();
  p << hi - lo, mean, std::sqrt(std::max(var, 1e-300)), lo;

  auto model = [&](const Eigen::VectorXd& q) {
    const Eigen::ArrayXd z = (o.x.array() - q[1]) / q[2];
    return (q[0] * (-0.5 * z.square()).exp() + q[3]).matrix().eval();
  };
  auto residuals = [&](const Eigen::VectorXd& q) {
    return ((model(q) - o.y).array() * o.inv_sigma.array()).matrix().eval();
  };
  auto jacobian = [&](const Eigen::VectorXd& q) {
    const Eigen::ArrayXd z = (o.x.array() - q[1]) / q[2];
    const Eigen::ArrayXd e = (-0.5 * z.square()).exp();
    Eigen::MatrixXd J(o.x.size(), 4);
    J.col(0) = e.matrix();
    J.col(1) = (q[0] * e * z / q[2]).matrix();
    J.col(2) = (q[0] * e * z.square() / q[2]).matrix();
    J.col(3).setOnes();
    for (Eigen::Index c = 0; c < 4; ++c) J.col(c).array() *= o.inv_sigma.array();
    return J;
  };
  auto fit = levenberg_marquardt(std::move(names), p, residuals, jacobian);
  fit.parameters[2] = std::abs(fit.parameters[2]);
  return fit;
}

FitResult fit_knife_profile(const ScanResult& data, const OpticalSetup& prior, const AngularGrid& grid) {
  return fit_knife_profile(data, prior, KnifeModel(prior, grid));
}

FitResult fit_knife_profile(const ScanResult& data, const OpticalSetup& prior, const KnifeModel& model) {
  std::vector<std::string> names{"effective_L", "scale", "baseline"};
  if (data.size() < 8) throw ArgumentError("knife fit needs at least 8 data points");
  const auto o = observations(data);
  const std::vector<double> xs(o.x.data(), o.x.data() + o.x.size());
  const double lo = o.y.minCoeff();
  const double hi = o.y.maxCoeff();
  Eigen::VectorXd p(3);
  p << prior.length_um, hi - lo, lo;
  if (!(hi > lo)) return not_converged(std::move(names), p, "degenerate data: all counts equal");

  auto profile = [&](double length) {
    const auto t = model.transmission(xs, length);
    return Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())).eval();
  };
  // The profile is not monotone in L, so LM starts from the best point of a coarse scan
  // around the prior, with scale and baseline solved linearly at each trial length.
  {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 40; ++j) {
      const double length = prior.length_um * (0.5 + j / 40.0);
      Eigen::MatrixXd a(o.x.size(), 2);
      a.col(0) = profile(length).cwiseProduct(o.inv_sigma);
      a.col(1) = o.inv_sigma;
      const Eigen::VectorXd b = o.y.cwiseProduct(o.inv_sigma);
      const Eigen::Vector2d sb = a.colPivHouseholderQr().solve(b);
      const double cost = (a * sb - b).squaredNorm();
      if (cost < best && sb[0] > 0.0) {
        best = cost;
        p << length, sb[0], sb[1];
      }
    }
  }

  auto residuals = [&](const Eigen::VectorXd& q) {
    if (!(q[0] > 0.0)) return Eigen::VectorXd::Constant(o.x.size(), std::numeric_limits<double>::infinity()).eval();
    return (((q[1] * profile(q[0])).array() + q[2] - o.y.array()) * o.inv_sigma.array()).matrix().eval();
  };
  auto jacobian = [&](const Eigen::VectorXd& q) {
    const double h = 1e-6 * std::abs(q[0]);
    Eigen::MatrixXd J(o.x.size(), 3);
    J.col(0) = q[1] * (profile(q[0] + h) - profile(q[0] - h)) / (2.0 * h);
    J.col(1) = profile(q[0]);
    J.col(2).setOnes();
    for (Eigen::Index c = 0; c < 3; ++c) J.col(c).array() *= o.inv_sigma.array();
    return J;
  };
  auto fit = levenberg_marquardt(std::move(names), p, residuals, jacobian);

  for (Eigen::Index k = 0; k + 1 < o.y.size(); ++k) {
    const double drop = o.y[k] - o.y[k + 1];
    const double noise = std::hypot(1.0 / o.inv_sigma[k], 1.0 / o.inv_sigma[k + 1]);
    if (drop > 3.0 * noise) {
      fit.warnings.push_back("profile decreases beyond noise between " + std::to_string(o.x[k]) + " and " +
                             std::to_string(o.x[k + 1]) + " deg");
    }
  }
  return fit;
}

}  // namespace biphoton
