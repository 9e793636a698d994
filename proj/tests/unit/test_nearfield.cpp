#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "biphoton/error.hpp"
#include "biphoton/metrics.hpp"
#include "biphoton/nearfield.hpp"
#include "oracles.hpp"

using namespace biphoton;

namespace {

OpticalSetup thin_setup(double length_um) {
  OpticalSetup s;
  s.length_um = length_um;
  s.waist_um = 50.0;
  s.index_model = IndexModel::builtin("mgo_ln_e");
  return s;
}

std::vector<double> axis(int n, double step) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = (j - n / 2) * step;
  return a;
}

}  // namespace

TEST_SUITE("nearfield") {
  TEST_CASE("FFT transform equals a direct DFT") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int n : {65, 66}) {
      const auto q = axis(n, 0.37);
      Eigen::MatrixXcd f(n, n);
      for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) f(i, s) = {g(rng), g(rng)};
      }
      const auto far = make_amplitude(Domain::far_field_wavevector, q, q, f);
      const auto near = to_near_field(far);
      const auto ref = oracle::naive_near_field(far.values, q, q, near.axis_i, near.axis_s);
      CAPTURE(n);
      CHECK((near.values - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
      CHECK(near.step_i() == rel(2.0 * std::numbers::pi / (n * 0.37)).epsilon(1e-14));
    }
  }

  TEST_CASE("Parseval and round trip") {
    const auto s = thin_setup(1.38);
    const auto far = build_joint_amplitude(s, propagating_wavevector_grid(s, 257));
    const auto near = to_near_field(far);
    CHECK(near.domain == Domain::near_field_position);
    CHECK(std::abs(near.total_probability() - 1.0) < 1e-9);
    CHECK(std::abs(far.total_probability() - 1.0) < 1e-9);
    CHECK(std::abs(near.norm_constant / far.norm_constant - 1.0) < 1e-9);
    const auto back = to_far_field(near);
    CHECK((back.intensity() - far.intensity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.values - far.values).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("angle-domain input is resampled onto transverse wavevector") {
    const auto s = thin_setup(6.7);
    const auto far = build_joint_amplitude(s, AngularGrid{35.0, 129});
    const auto q = resample_to_wavevector(far);
    CHECK(q.domain == Domain::far_field_wavevector);
    const double k0s = 2.0 * std::numbers::pi / 0.797;
    CHECK(q.axis_s.back() == rel(k0s * std::sin(35.0 * std::numbers::pi / 180.0)).epsilon(1e-12));
    CHECK(std::abs(q.total_probability() - 1.0) < 1e-12);
    const auto near = to_near_field(far);
    CHECK(std::abs(near.total_probability() - 1.0) < 1e-9);
  }

  TEST_CASE("separable Gaussian transforms analytically") {
    // F(q) = exp(-q^2 a^2 / 2) per axis maps to exp(-x^2 / (2 a^2)) per axis.
    const double a = 3.0;
    const int n = 255;
    const auto q = axis(n, 0.05);
    Eigen::MatrixXcd f(n, n);
    for (int s = 0; s < n; ++s) {
      for (int i = 0; i < n; ++i) {
        const double qi = q[static_cast<std::size_t>(i)];
        const double qs = q[static_cast<std::size_t>(s)];
        f(i, s) = std::exp(-0.5 * a * a * (qi * qi + qs * qs));
      }
    }
    const auto near = to_near_field(make_amplitude(Domain::far_field_wavevector, q, q, f));
    WidthConvention astd{WidthKind::amplitude_std_dev, std::nullopt};
    CHECK(marginal_width(near, Party::signal, astd) == rel(a).epsilon(1e-6));
    CHECK(marginal_width(near, Party::idler, astd) == rel(a).epsilon(1e-6));
  }

  TEST_CASE("too coarse grids are rejected") {
    const auto s = thin_setup(1.38);
    const auto far = build_joint_amplitude(s, AngularGrid{35.0, 63});
    CHECK_THROWS_AS((void)to_near_field(far), ResolutionError);
    const auto near = to_near_field(build_joint_amplitude(s, propagating_wavevector_grid(s, 65)));
    CHECK_THROWS_AS((void)to_near_field(near), ArgumentError);
    CHECK_THROWS_AS((void)to_far_field(far), ArgumentError);
  }

  TEST_CASE("near-field correlation stripe runs along x_i = x_s") {
    const auto s = thin_setup(1.38);
    const auto near = to_near_field(build_joint_amplitude(s, WavevectorGrid{8.0, 257}));
    const Eigen::MatrixXd p = near.intensity();
    const Eigen::Index c = 128;
    CHECK(p(c + 20, c + 20) > 100.0 * p(c + 20, c - 20));
  }
}
