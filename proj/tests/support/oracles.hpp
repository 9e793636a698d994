#pragma once

// Reference computations shared by the unit and acceptance tests. Each is written
// independently of the library's implementation of the same quantity.

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "biphoton/amplitude.hpp"

namespace oracle {

// Refractive index straight from a dispersion data file, parsed line by line.
inline double sellmeier_index_from_file(const std::string& path, double lambda_nm) {
  std::ifstream in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || line[0] == '#' || line[0] == '[') continue;
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  auto list = [&](const std::string& key) {
    std::vector<double> v;
    std::stringstream ss(kv.at(key));
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  const auto b = list("numerators");
  const auto c = list("poles_um2");
  const auto p = list("wavelength_powers");
  const double l = lambda_nm * 1e-3;
  double n2 = std::stod(kv.at("offset"));
  for (std::size_t j = 0; j < b.size(); ++j) n2 += b[j] * std::pow(l, p[j]) / (l * l - c[j]);
  return std::sqrt(n2);
}

// Double-Gaussian amplitude exp(-(x1+x2)^2/(2A^2) - (x1-x2)^2/(2B^2)).
// Its Schmidt eigenvalues are (1-mu) mu^n with mu = ((r-1)/(r+1))^2, r = A/B, and the ratio of
// marginal to conditional standard deviation equals (r + 1/r)/2.
struct DoubleGaussian {
  double a;
  double b;

  double r() const { return a / b; }
  double mu() const {
    const double q = (r() - 1.0) / (r() + 1.0);
    return q * q;
  }
  double schmidt_number() const { return (1.0 + mu()) / (1.0 - mu()); }
  double std_ratio() const { return 0.5 * (r() + 1.0 / r()); }
  double marginal_std() const { return std::sqrt((a * a + b * b) / 8.0); }
  double conditional_std() const { return std::sqrt(a * a * b * b / (2.0 * (a * a + b * b))); }

  // Amplitude with std ratio R and unit conditional scale.
  static DoubleGaussian with_ratio(double ratio) {
    const double r = ratio + std::sqrt(ratio * ratio - 1.0);
    return {r, 1.0};
  }

  biphoton::JointAmplitude sample(int n, double half_span) const {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = -half_span + 2.0 * half_span * j / (n - 1);
    Eigen::MatrixXcd v(n, n);
    for (int s = 0; s < n; ++s) {
      for (int i = 0; i < n; ++i) {
        const double u = x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(s)];
        const double w = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(s)];
        v(i, s) = std::exp(-u * u / (2 * a * a) - w * w / (2 * b * b));
      }
    }
    return biphoton::make_amplitude(biphoton::Domain::far_field_angle, x, x, v);
  }
};

// Direct O(n^2) per-axis centered DFT with the near-field sign convention.
inline Eigen::MatrixXcd naive_near_field(const Eigen::MatrixXcd& f, const std::vector<double>& qi,
                                         const std::vector<double>& qs, const std::vector<double>& xi,
                                         const std::vector<double>& xs) {
  const double dqi = qi[1] - qi[0];
  const double dqs = qs[1] - qs[0];
  Eigen::MatrixXcd tmp(static_cast<Eigen::Index>(xi.size()), f.cols());
  for (std::size_t m = 0; m < xi.size(); ++m) {
    for (Eigen::Index b = 0; b < f.cols(); ++b) {
      std::complex<double> acc = 0.0;
      for (std::size_t a = 0; a < qi.size(); ++a) {
        acc += f(static_cast<Eigen::Index>(a), b) * std::polar(1.0, -qi[a] * xi[m]);
      }
      tmp(static_cast<Eigen::Index>(m), b) = acc;
    }
  }
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(xi.size()), static_cast<Eigen::Index>(xs.size()));
  for (Eigen::Index m = 0; m < out.rows(); ++m) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t b = 0; b < qs.size(); ++b) {
        acc += tmp(m, static_cast<Eigen::Index>(b)) * std::polar(1.0, qs[b] * xs[k]);
      }
      out(m, static_cast<Eigen::Index>(k)) = acc * dqi * dqs / (2.0 * std::numbers::pi);
    }
  }
  return out;
}

}  // namespace oracle
