#include <benchmark/benchmark.h>

#include <random>

#include "biflip/batch.hpp"

using namespace biflip;

namespace {

Flipper random_line(std::mt19937_64& rng, Space space) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (space == Space::S2) {
        Vec v(3);
        v << u(rng), u(rng), u(rng) + 2.0;
        return pair_flipper(v.normalized());
    }
    Vec p(3), d(3);
    p << 5 * u(rng), 5 * u(rng), 5 * u(rng);
    d << u(rng), u(rng), u(rng) + 2.0;
    return line_flipper(Space::E3, p, d.normalized());
}

std::vector<std::pair<Biflipper, Biflipper>> make_pairs(Space space, int n) {
    std::mt19937_64 rng(7);
    std::vector<std::pair<Biflipper, Biflipper>> pairs;
    for (int i = 0; i < n; ++i) {
        pairs.emplace_back(Biflipper{random_line(rng, space), random_line(rng, space)},
                           Biflipper{random_line(rng, space), random_line(rng, space)});
    }
    return pairs;
}

void run_pairs(benchmark::State& state, Space space, Exec exec) {
    const auto pairs = make_pairs(space, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(head_to_tail_errors(pairs, Mode::Fallback, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void encode_kernel(benchmark::State& state, Exec exec) {
    const auto pairs = make_pairs(Space::E3, static_cast<int>(state.range(0)));
    std::vector<Biflipper> items;
    for (const auto& p : pairs) items.push_back(p.first);
    for (auto _ : state) benchmark::DoNotOptimize(encode_all(items, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK_CAPTURE(run_pairs, screws_serial, Space::E3, Exec::Serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run_pairs, screws_parallel, Space::E3, Exec::Parallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run_pairs, sphere_serial, Space::S2, Exec::Serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run_pairs, sphere_parallel, Space::S2, Exec::Parallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(encode_kernel, serial, Exec::Serial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(encode_kernel, parallel, Exec::Parallel)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
