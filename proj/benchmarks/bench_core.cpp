#include <benchmark/benchmark.h>

#include "biphoton/metrics.hpp"
#include "biphoton/nearfield.hpp"
#include "biphoton/scans.hpp"

using namespace biphoton;

namespace {

OpticalSetup thin_layer() {
  OpticalSetup s;
  s.length_um = 6.7;
  s.waist_um = 60.0;
  s.index_model = IndexModel::builtin("mgo_ln_e");
  return s;
}

void BM_BuildAmplitude(benchmark::State& state) {
  const auto setup = thin_layer();
  const AngularGrid grid{35.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(build_joint_amplitude(setup, grid));
}
BENCHMARK(BM_BuildAmplitude)->Arg(257)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_SchmidtSvd(benchmark::State& state) {
  const auto amp = build_joint_amplitude(thin_layer(), AngularGrid{35.0, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_spectrum(amp, 32));
}
BENCHMARK(BM_SchmidtSvd)->Arg(257)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_NearField(benchmark::State& state) {
  const auto setup = thin_layer();
  const auto far = build_joint_amplitude(setup, propagating_wavevector_grid(setup, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(to_near_field(far));
}
BENCHMARK(BM_NearField)->Arg(513)->Arg(1025)->Arg(2049)->Unit(benchmark::kMillisecond);

void BM_KnifeTransmission(benchmark::State& state) {
  auto setup = thin_layer();
  setup.waist_um = 10.0;
  const KnifeModel model(setup, AngularGrid{17.46, 401});
  std::vector<double> knife;
  for (int j = 0; j <= 34; ++j) knife.push_back(-1.0 + 0.5 * j);
  for (auto _ : state) benchmark::DoNotOptimize(model.transmission(knife, 6.6));
}
BENCHMARK(BM_KnifeTransmission)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
