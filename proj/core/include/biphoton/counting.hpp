#pragma once

#include <cstdint>
#include <random>

namespace biphoton {

struct CountingConfig {
  double acquisition_time_s = 60.0;
  double coincidence_window_ns = 1.0;
  double singles_rate_signal_hz = 0.0;
  double singles_rate_idler_hz = 0.0;
  double pair_rate_open_hz = 100.0;
  std::uint64_t rng_seed = 42;

  void validate() const;
  // R_s * R_i * tau, in coincidences per second.
  double accidental_rate() const;
};

// Independent, reproducible stream for (seed, index) via splitmix64.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

// Uniform on [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

// Poisson variate; inversion below mean 10, transformed rejection (PTRS) above.
// Defined bit-for-bit by this implementation, unlike std::poisson_distribution.
std::int64_t poisson(double mean, std::mt19937_64& rng);

struct CountPair {
  std::int64_t raw = 0;
  std::int64_t accidental = 0;
};

// raw ~ Poisson((rate + R_acc) T), accidental ~ Poisson(R_acc T), drawn from stream `index`.
CountPair simulate_counts(double expected_rate_hz, const CountingConfig& cfg, std::uint64_t index = 0);

// Time-tag simulation of one acquisition: pair clicks at `pair_rate_hz` plus uncorrelated
// background so each arm's total rate matches its singles rate. Coincidences are counted in
// a window at zero delay and in an equal window displaced by `delay_ns`.
struct DisplacedWindowCounts {
  std::int64_t prompt = 0;
  std::int64_t displaced = 0;  // estimates the accidentals inside the prompt window
};

DisplacedWindowCounts displaced_window_counts(double pair_rate_hz, const CountingConfig& cfg, double delay_ns,
                                              std::uint64_t index = 0);

}  // namespace biphoton
