#include <miniq/gait.hpp>
#include <miniq/legkin.hpp>
#include <miniq/sim.hpp>
#include <miniq/workspace.hpp>

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<miniq::JointAngles> random_configs(std::size_t n) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<miniq::JointAngles> configs(n);
    for (auto &q : configs)
        q = {angle(rng), angle(rng)};
    return configs;
}

void bm_forward_kinematics(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto configs = random_configs(1024);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto p = miniq::forward_kinematics(geom, configs[k++ & 1023]);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(bm_forward_kinematics);

void bm_inverse_kinematics(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto configs = random_configs(1024);
    std::vector<miniq::FootPoint> targets(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i)
        targets[i] = miniq::forward_kinematics(geom, configs[i]);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto sol =
            miniq::inverse_kinematics(geom, targets[k++ & 1023], miniq::Branch::ElbowPlus);
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(bm_inverse_kinematics);

void bm_jacobians(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto configs = random_configs(1024);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto jac = miniq::jacobians(geom, configs[k++ & 1023]);
        benchmark::DoNotOptimize(jac);
    }
}
BENCHMARK(bm_jacobians);

void bm_manipulability(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto configs = random_configs(1024);
    std::size_t k = 0;
    for (auto _ : state) {
        const double w = miniq::manipulability(geom, configs[k++ & 1023]);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(bm_manipulability);

void bm_serial_workspace(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const int res = static_cast<int>(state.range(0));
    const double extent = 1.05 * geom.reach();
    const miniq::GridSpec grid{-extent, extent, -extent, extent, res};
    for (auto _ : state) {
        const auto ws = miniq::serial_workspace(geom, grid);
        benchmark::DoNotOptimize(ws.reachable.data());
    }
}
BENCHMARK(bm_serial_workspace)->Arg(201)->Arg(401);

void bm_fivebar_workspace(benchmark::State &state) {
    const miniq::FiveBarGeometry fb{};
    const miniq::GridSpec grid{-0.06, 0.06, -0.06, 0.06, 201};
    const int samples = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto ws = miniq::fivebar_workspace(fb, grid, samples);
        benchmark::DoNotOptimize(ws.reachable.data());
    }
}
BENCHMARK(bm_fivebar_workspace)->Arg(128)->Arg(256);

void bm_manipulability_map(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const double extent = 1.05 * geom.reach();
    const miniq::GridSpec grid{-extent, extent, -extent, extent, 201};
    for (auto _ : state) {
        const auto map = miniq::manipulability_map(geom, grid, miniq::Branch::ElbowPlus);
        benchmark::DoNotOptimize(map.values.data());
    }
}
BENCHMARK(bm_manipulability_map);

void bm_gait_to_actuator(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto spec = miniq::make_gait(miniq::GaitParams{}, geom);
    for (auto _ : state) {
        const auto traj = miniq::gait_to_actuator(spec, geom, 0.002, 1, 47.7);
        benchmark::DoNotOptimize(traj.samples.data());
    }
}
BENCHMARK(bm_gait_to_actuator);

void bm_simulate_gait(benchmark::State &state) {
    const miniq::RobotConfig robot{};
    const miniq::MotorModel motor{};
    const auto spec = miniq::make_gait(miniq::GaitParams{}, robot.geom);
    for (auto _ : state) {
        const auto result = miniq::simulate_gait(spec, robot, motor);
        benchmark::DoNotOptimize(result.avg_current);
    }
}
BENCHMARK(bm_simulate_gait);

void bm_flip_recovery(benchmark::State &state) {
    const miniq::LegGeometry geom{};
    const auto spec = miniq::make_gait(miniq::GaitParams{}, geom);
    const auto walk = miniq::gait_to_actuator(spec, geom, 0.002, 1, 47.7);
    const auto pose = walk.samples[10];
    for (auto _ : state) {
        const auto plan = miniq::flip_recovery(pose, 0.001, 47.7);
        benchmark::DoNotOptimize(plan.samples.data());
    }
}
BENCHMARK(bm_flip_recovery);

} // namespace

BENCHMARK_MAIN();
