#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>

#include "biphoton/amplitude.hpp"
#include "biphoton/error.hpp"
#include "biphoton/metrics.hpp"

using namespace biphoton;

namespace {

OpticalSetup ln_setup(double length_um, double waist_um) {
  OpticalSetup s;
  s.length_um = length_um;
  s.waist_um = waist_um;
  s.index_model = IndexModel::builtin("mgo_ln_e");
  return s;
}

OpticalSetup degenerate_setup() {
  OpticalSetup s = ln_setup(6.7, 60.0);
  s.signal_nm = s.idler_nm = 1064.0;
  return s;
}

}  // namespace

TEST_SUITE("amplitude") {
  TEST_CASE("pump envelope values") {
    const double sigma = 60.0;
    CHECK(pump_envelope(0.0, sigma) == 1.0);
    CHECK(pump_envelope(std::sqrt(2.0) / sigma, sigma) == rel(std::exp(-1.0)).epsilon(1e-14));
    CHECK(pump_envelope(2.0 / sigma, sigma) == rel(0.1353352832366127).epsilon(1e-14));
    CHECK(pump_envelope(0.3, sigma) == pump_envelope(-0.3, sigma));
    CHECK_THROWS_AS((void)pump_envelope(0.1, 0.0), ArgumentError);
  }

  TEST_CASE("phase matching values") {
    const double length = 6.7;
    CHECK(phase_matching(0.0, length) == 1.0);
    CHECK(std::abs(phase_matching(2.0 * std::numbers::pi / length, length)) < 1e-15);
    CHECK(phase_matching(std::numbers::pi / length, length) == rel(2.0 / std::numbers::pi).epsilon(1e-14));
    CHECK_THROWS_AS((void)phase_matching(0.1, -1.0), ArgumentError);
  }

  TEST_CASE("sinc series branch is continuous") {
    CHECK(sinc(0.0) == 1.0);
    const double x = 0.99e-4;
    CHECK(sinc(x) == rel(std::sin(x) / x).epsilon(1e-15));
    const double y = 1.01e-4;
    CHECK(sinc(y) == rel(1.0 - y * y / 6.0).epsilon(1e-15));
    double lowest = 1.0;
    for (int j = 0; j < 100000; ++j) lowest = std::min(lowest, sinc(j * 1e-3));
    CHECK(lowest == rel(-0.2172336282112217).epsilon(1e-6));
  }

  TEST_CASE("mismatch at normal incidence") {
    const auto s = ln_setup(6.7, 60.0);
    CHECK(mismatch(0.0, 0.0, s).dk_perp == 0.0);
    OpticalSetup d;
    d.index_model = IndexModel::constant(2.2);
    d.pump_nm = 532.0;
    d.signal_nm = d.idler_nm = 1064.0;
    CHECK(mismatch(0.0, 0.0, d).dk_par == 0.0);
  }

  TEST_CASE("mismatch matches the closed form") {
    OpticalSetup s;
    s.index_model = IndexModel::constant(2.2);
    const double n = 2.2;
    const double kp = 2 * std::numbers::pi * n / 0.532;
    const double ks = 2 * std::numbers::pi * n / 0.797;
    const double idler = 1.0 / (1.0 / 532.0 - 1.0 / 797.0);
    const double ki = 2 * std::numbers::pi * n / (idler * 1e-3);
    const double t = 10.0 * std::numbers::pi / 180.0;

    SUBCASE("internal angles") {
      s.refraction = false;
      const auto m = mismatch(10.0, 10.0, s);
      CHECK(m.dk_perp == rel(ks * std::sin(t) - ki * std::sin(t)).epsilon(1e-12));
      CHECK(m.dk_par == rel(kp - ks * std::cos(t) - ki * std::cos(t)).epsilon(1e-12));
    }
    SUBCASE("external angles with conserved transverse wavevector") {
      const double k0s = ks / n;
      const double k0i = ki / n;
      const auto m = mismatch(10.0, 10.0, s);
      const double qs = k0s * std::sin(t);
      const double qi = k0i * std::sin(t);
      CHECK(m.dk_perp == rel(qs - qi).epsilon(1e-12));
      CHECK(m.dk_par ==
            rel(kp - std::sqrt(ks * ks - qs * qs) - std::sqrt(ki * ki - qi * qi)).epsilon(1e-12));
    }
  }

  TEST_CASE("grazing angles are domain errors") {
    const auto s = ln_setup(6.7, 60.0);
    CHECK_THROWS_AS((void)mismatch(90.0, 0.0, s), DomainError);
    CHECK_THROWS_AS((void)mismatch(0.0, -91.0, s), DomainError);
    CHECK_NOTHROW((void)mismatch(89.9, 0.0, s));
  }

  TEST_CASE("normalization, realness and the norm constant") {
    const auto s = ln_setup(6.7, 60.0);
    const auto amp = build_joint_amplitude(s, AngularGrid{35.0, 513});
    CHECK(amp.domain == Domain::far_field_angle);
    CHECK(std::abs(amp.total_probability() - 1.0) < 1e-12);
    CHECK(amp.values.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(amp.norm_constant > 0.0);
    CHECK(amp.values.cwiseAbs().maxCoeff() <= amp.norm_constant * (1.0 + 1e-12));
    CHECK(amp.values.rows() == 513);
    CHECK(amp.axis_i.front() == -35.0);
    CHECK(amp.axis_i.back() == 35.0);
    CHECK(amp.axis_i[256] == 0.0);
  }

  TEST_CASE("degenerate wavelengths give a bit-exact symmetric amplitude") {
    const auto amp = build_joint_amplitude(degenerate_setup(), AngularGrid{30.0, 257});
    CHECK((amp.values - amp.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("TPI peak lies on the stripe where the phase-matching factor is largest") {
    const auto s = ln_setup(6.7, 60.0);
    const auto amp = build_joint_amplitude(s, AngularGrid{35.0, 257});
    Eigen::Index ri = 0, cs = 0;
    amp.intensity().maxCoeff(&ri, &cs);
    const auto peak = mismatch(amp.axis_i[static_cast<std::size_t>(ri)], amp.axis_s[static_cast<std::size_t>(cs)], s);
    CHECK(std::abs(peak.dk_perp) < 1.0 / s.waist_um);
    double stripe_max = 0.0;
    for (std::size_t i = 0; i < amp.axis_i.size(); ++i) {
      for (std::size_t j = 0; j < amp.axis_s.size(); ++j) {
        const auto m = mismatch(amp.axis_i[i], amp.axis_s[j], s);
        if (std::abs(m.dk_perp) < 1.0 / s.waist_um) {
          stripe_max = std::max(stripe_max, std::abs(phase_matching(m.dk_par, s.length_um)));
        }
      }
    }
    CHECK(std::abs(phase_matching(peak.dk_par, s.length_um)) >= 0.95 * stripe_max);
  }

  TEST_CASE("phase matching exponent two squares the longitudinal factor") {
    auto s = ln_setup(6.7, 60.0);
    const auto a1 = build_joint_amplitude(s, AngularGrid{35.0, 129});
    s.phasematch_exponent = 2;
    const auto a2 = build_joint_amplitude(s, AngularGrid{35.0, 129});
    const auto m = mismatch(a1.axis_i[80], a1.axis_s[80], s);
    const double fp = pump_envelope(m.dk_perp, 60.0);
    const double pm = phase_matching(m.dk_par, 6.7);
    CHECK(a1.values(80, 80).real() / a1.norm_constant == rel(fp * pm).epsilon(1e-12));
    CHECK(a2.values(80, 80).real() / a2.norm_constant == rel(fp * pm * pm).epsilon(1e-12));
  }

  TEST_CASE("collinear phase matching nulls the collinear mismatch") {
    auto s = ln_setup(1400.0, 50.0);
    s.phase_matching = PhaseMatching::collinear;
    CHECK(std::abs(mismatch(0.0, 0.0, s).dk_par) < 1e-12);
  }

  TEST_CASE("wavevector grids zero the evanescent components") {
    const auto s = ln_setup(1.38, 50.0);
    const auto k = wavenumbers(s);
    WavevectorGrid g{1.2 * k.signal, 257};
    const auto amp = build_joint_amplitude(s, g);
    for (std::size_t j = 0; j < g.axis().size(); ++j) {
      if (std::abs(amp.axis_s[j]) >= k.signal) {
        CHECK(amp.values.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff() == 0.0);
      }
    }
    CHECK(std::abs(amp.total_probability() - 1.0) < 1e-12);
  }

  TEST_CASE("main lobe restriction keeps only the central lobe") {
    const auto s = ln_setup(6.7, 60.0);
    const auto amp = build_joint_amplitude(s, AngularGrid{35.0, 257});
    const auto main = restrict_to_main_lobe(amp, s);
    CHECK(std::abs(main.total_probability() - 1.0) < 1e-12);
    const auto centre = static_cast<Eigen::Index>(128);
    CHECK(main.values(centre, centre) != 0.0);
    CHECK(main.values(0, 0) == 0.0);
  }

  TEST_CASE("grid validation") {
    const auto s = ln_setup(6.7, 60.0);
    CHECK_THROWS_AS((void)build_joint_amplitude(s, AngularGrid{35.0, 512}), ArgumentError);
    CHECK_THROWS_AS((void)build_joint_amplitude(s, AngularGrid{35.0, 1}), ArgumentError);
    CHECK_THROWS_AS((void)build_joint_amplitude(s, AngularGrid{95.0, 101}), ArgumentError);
    auto bad = s;
    bad.length_um = -1;
    CHECK_THROWS_AS((void)build_joint_amplitude(bad, AngularGrid{}), ArgumentError);
  }

  TEST_CASE("grid refinement changes derived widths by under half a percent") {
    const auto s = ln_setup(6.7, 60.0);
    const auto coarse = build_joint_amplitude(s, AngularGrid{35.0, 1025});
    const auto fine = build_joint_amplitude(s, AngularGrid{35.0, 2049});
    const WidthConvention conv;
    const double d0 = marginal_width(coarse, Party::idler, conv);
    const double d1 = marginal_width(fine, Party::idler, conv);
    const double c0 = conditional_width(coarse, conv);
    const double c1 = conditional_width(fine, conv);
    CHECK(std::abs(d1 / d0 - 1.0) < 5e-3);
    CHECK(std::abs(c1 / c0 - 1.0) < 5e-3);
  }
}
