#include "biphoton/counting.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t poisson_inversion(double mean, std::mt19937_64& rng) {
  const double limit = std::exp(-mean);
  double p = uniform01(rng);
  std::int64_t k = 0;
  while (p > limit) {
    p *= uniform01(rng);
    ++k;
  }
  return k;
}

// Hormann, transformed rejection with squeeze.
std::int64_t poisson_ptrs(double lam, std::mt19937_64& rng) {
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = uniform01(rng) - 0.5;
    const double v = uniform01(rng);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lam + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -lam + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

std::vector<double> arrival_times(double rate, double duration, std::mt19937_64& rng) {
  std::vector<double> t;
  if (!(rate > 0.0)) return t;
  t.resize(static_cast<std::size_t>(poisson(rate * duration, rng)));
  for (auto& x : t) x = uniform01(rng) * duration;
  std::sort(t.begin(), t.end());
  return t;
}

std::int64_t count_within(const std::vector<double>& a, const std::vector<double>& b, double offset, double half) {
  std::int64_t n = 0;
  std::size_t lo = 0;
  for (double ta : a) {
    const double centre = ta + offset;
    while (lo < b.size() && b[lo] < centre - half) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j] < centre + half; ++j) ++n;
  }
  return n;
}

}  // namespace

void CountingConfig::validate() const {
  if (!(acquisition_time_s >= 0.0)) throw ArgumentError("acquisition time must be >= 0");
  if (!(coincidence_window_ns > 0.0)) throw ArgumentError("coincidence window must be > 0");
  if (!(singles_rate_signal_hz >= 0.0) || !(singles_rate_idler_hz >= 0.0) || !(pair_rate_open_hz >= 0.0)) {
    throw ArgumentError("count rates must be >= 0");
  }
}

double CountingConfig::accidental_rate() const {
  return singles_rate_signal_hz * singles_rate_idler_hz * coincidence_window_ns * 1e-9;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::int64_t poisson(double mean, std::mt19937_64& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ArgumentError("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

CountPair simulate_counts(double expected_rate_hz, const CountingConfig& cfg, std::uint64_t index) {
  if (!(expected_rate_hz >= 0.0)) throw ArgumentError("expected rate must be >= 0");
  cfg.validate();
  auto rng = make_stream(cfg.rng_seed, index);
  const double acc = cfg.accidental_rate() * cfg.acquisition_time_s;
  CountPair out;
  out.raw = poisson((expected_rate_hz * cfg.acquisition_time_s) + acc, rng);
  out.accidental = poisson(acc, rng);
  return out;
}

DisplacedWindowCounts displaced_window_counts(double pair_rate_hz, const CountingConfig& cfg, double delay_ns,
                                              std::uint64_t index) {
  cfg.validate();
  const double tau = cfg.coincidence_window_ns * 1e-9;
  if (!(std::abs(delay_ns) * 1e-9 > tau)) throw ArgumentError("displaced window must not overlap the prompt window");
  auto rng = make_stream(cfg.rng_seed, index);
  const double duration = cfg.acquisition_time_s;

  const auto pairs = arrival_times(pair_rate_hz, duration, rng);
  auto signal = arrival_times(std::max(cfg.singles_rate_signal_hz - pair_rate_hz, 0.0), duration, rng);
  auto idler = arrival_times(std::max(cfg.singles_rate_idler_hz - pair_rate_hz, 0.0), duration, rng);
  signal.insert(signal.end(), pairs.begin(), pairs.end());
  idler.insert(idler.end(), pairs.begin(), pairs.end());
  std::sort(signal.begin(), signal.end());
  std::sort(idler.begin(), idler.end());

  DisplacedWindowCounts out;
  out.prompt = count_within(signal, idler, 0.0, 0.5 * tau);
  out.displaced = count_within(signal, idler, delay_ns * 1e-9, 0.5 * tau);
  return out;
}

}  // namespace biphoton
