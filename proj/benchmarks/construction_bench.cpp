// Cost of the construction pipeline: integrating the profile curve, building
// the orbit sweep and certifying it, and the austere curve search.

#include "hopflab/constructor.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace hopflab;

void BM_IntegrateSigma(benchmark::State& state) {
  const auto spec = actions::polar_action(actions::ActionLabel::Ch2G0);
  const auto launch = constructor::make_launch(spec);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(constructor::integrate_sigma(spec, launch.point, launch.direction,
                                                          constructor::CurveLaw::cmc(1.0), 1e-3, steps, steps));
  }
  state.SetItemsProcessed(state.iterations() * 2 * steps);
}
BENCHMARK(BM_IntegrateSigma)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_Certify(benchmark::State& state) {
  const auto spec = actions::polar_action(actions::ActionLabel::Cp2Torus);
  const auto launch = constructor::make_launch(spec);
  const auto sigma = constructor::integrate_sigma(spec, launch.point, launch.direction,
                                                  constructor::CurveLaw::cmc(1.0), 1e-3, 100, 100);
  const auto surface = constructor::build_hypersurface(spec, sigma);
  constructor::CertifyOptions options;
  options.grid = {8, 3, 3};
  for (auto _ : state) benchmark::DoNotOptimize(constructor::strongly_2hopf_certify(surface, options));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);

void BM_AustereSearch(benchmark::State& state) {
  const auto spec = actions::polar_action(actions::ActionLabel::Cp2Torus);
  for (auto _ : state) benchmark::DoNotOptimize(constructor::austere_search(spec));
}
BENCHMARK(BM_AustereSearch)->Unit(benchmark::kMillisecond);

}  // namespace
