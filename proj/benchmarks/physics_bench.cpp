#include <benchmark/benchmark.h>

#include "airhockey/env/env.hpp"
#include "airhockey/physics/dynamics.hpp"
#include "airhockey/rng.hpp"

namespace {

using namespace airhockey;

void BM_StepWorldPuckOnly(benchmark::State& state) {
  physics::PhysicsParams p;
  physics::WorldState w;
  w.paddle = physics::make_paddle(p, {0.0, -0.7});
  w.puck = physics::make_puck(p, {0.05, 0.3}, {0.4, -1.2});
  const physics::Vec2 target{0.0, -0.6};
  for (auto _ : state) {
    physics::StepOutput out = physics::step_world(w, target, p);
    benchmark::DoNotOptimize(out);
    w = std::move(out.world);
    if (w.tick % 200 == 0) w.puck = physics::make_puck(p, {0.05, 0.3}, {0.4, -1.2});
  }
}
BENCHMARK(BM_StepWorldPuckOnly);

// Env step with random actions; the episode restarts when it ends.
void BM_EnvStep(benchmark::State& state) {
  const auto id = static_cast<env::TaskId>(state.range(0));
  env::Env e = env::make_task(id, env::EnvConfig{}, 1);
  e.reset();
  Rng rng(2);
  for (auto _ : state) {
    const env::StepResult r = e.step({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    benchmark::DoNotOptimize(r.reward);
    if (r.done) e.reset();
  }
  state.SetLabel(env::to_string(id));
}
BENCHMARK(BM_EnvStep)
    ->Arg(static_cast<int>(env::TaskId::kReach))
    ->Arg(static_cast<int>(env::TaskId::kStrike))
    ->Arg(static_cast<int>(env::TaskId::kStrikeCrowd));

}  // namespace
