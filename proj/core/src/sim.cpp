#include "miniq/sim.hpp"

#include "miniq/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace miniq {

namespace {

// Samples per gait cycle; divisible by 2, 3, 4, 5, 8 so the common duty
// fractions land stance boundaries on sample points.
constexpr int kCycleSamples = 240;

double check_efficiency(double efficiency) {
    if (!(efficiency > 0.0) || efficiency > 1.0)
        throw InvalidParamsError("transmission efficiency must lie in (0, 1]");
    return efficiency;
}

} // namespace

void validate(const RobotConfig &cfg) {
    if (!(cfg.mass > 0.0) || !(cfg.body_length > 0.0) || !(cfg.gravity > 0.0) ||
        !(cfg.bus_voltage > 0.0))
        throw InvalidParamsError("robot mass, body length, gravity, voltage must be positive");
    validate(cfg.geom);
}

void validate(const MotorModel &motor) {
    if (!(motor.stall_torque > 0.0) || !(motor.no_load_speed > 0.0))
        throw InvalidParamsError("motor stall torque and no-load speed must be positive");
    if (!(motor.no_load_current >= 0.0) || !(motor.stall_current > motor.no_load_current))
        throw InvalidParamsError("motor currents must satisfy stall > no-load >= 0");
}

double motor_current(const MotorModel &motor, double torque, double speed) {
    (void)speed; // affine fit is torque-only; kept for interface symmetry
    const double mag = std::fabs(torque);
    if (mag > motor.stall_torque * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "torque " << mag << " N*m exceeds stall torque " << motor.stall_torque;
        throw OverTorqueError(msg.str());
    }
    // Convex combination, not slope-intercept: both datasheet endpoints are
    // then hit exactly instead of up to a rounding off.
    const double frac = std::min(mag / motor.stall_torque, 1.0);
    return motor.no_load_current * (1.0 - frac) + motor.stall_current * frac;
}

SimResult simulate_gait(const GaitSpec &spec, const RobotConfig &cfg, const MotorModel &motor,
                        double efficiency) {
    validate(cfg);
    validate(motor);
    check_efficiency(efficiency);
    const GaitParams &params = spec.params;
    validate(params);

    const double period = 1.0 / params.frequency;
    const double dt = period / kCycleSamples;
    const ActuatorTrajectory traj =
        gait_to_actuator(spec, cfg.geom, dt, 1, motor.no_load_speed);

    const double weight = cfg.mass * cfg.gravity;
    SimResult result;
    result.v_ss = params.step_length * params.frequency / params.duty;
    result.normalized_v = normalized_speed(result.v_ss, cfg.body_length);
    result.stance_torques.reserve(kCycleSamples);

    double current_sum = 0.0;
    for (int k = 0; k < kCycleSamples; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double phase = static_cast<double>(k) / kCycleSamples;
        std::array<bool, 4> stance{};
        int n_stance = 0;
        for (std::size_t l = 0; l < 4; ++l) {
            const double local = phase - params.phase_offsets[l];
            stance[l] = local - std::floor(local) < params.duty;
            n_stance += stance[l] ? 1 : 0;
        }
        if (n_stance == 0) {
            std::ostringstream msg;
            msg << "no stance leg at phase " << phase
                << "; the quasi-static model needs continuous support";
            throw InvalidParamsError(msg.str());
        }
        const WrenchForce support{0.0, weight / n_stance};

        double current_k = 0.0;
        double torque_k = 0.0;
        for (std::size_t l = 0; l < 4; ++l) {
            const ActuatorAngles &theta = traj.samples[ku][l];
            const ActuatorAngles &next = traj.samples[ku + 1][l];
            const double w1 = (next.theta1 - theta.theta1) / dt;
            const double w2 = (next.theta2 - theta.theta2) / dt;
            if (!stance[l]) {
                current_k += motor_current(motor, 0.0, w1) + motor_current(motor, 0.0, w2);
                continue;
            }
            const ActuatorTorques tau =
                static_torques(cfg.geom, actuator_to_joint(theta), support);
            const double t1 = tau.tau1 / efficiency;
            const double t2 = tau.tau2 / efficiency;
            current_k += motor_current(motor, t1, w1) + motor_current(motor, t2, w2);
            torque_k = std::max({torque_k, std::fabs(t1), std::fabs(t2)});
        }
        current_sum += current_k;
        result.stance_torques.push_back(torque_k);
    }

    result.avg_current = current_sum / kCycleSamples;
    result.cot = result.v_ss > 0.0
                     ? cost_of_transport({cfg.bus_voltage, result.avg_current, cfg.mass,
                                          cfg.gravity, result.v_ss})
                     : std::numeric_limits<double>::infinity();
    return result;
}

SimResult simulate_rotary(const RotaryCommand &cmd, const RobotConfig &cfg,
                          const MotorModel &motor, double efficiency) {
    validate(cfg);
    validate(motor);
    check_efficiency(efficiency);
    if (cmd.theta1_rate != cmd.theta2_rate)
        throw InvalidParamsError("rotary command must spin both channels at one rate");
    const double omega = cmd.theta1_rate;
    if (std::fabs(omega) > motor.no_load_speed) {
        std::ostringstream msg;
        msg << "rotary speed " << std::fabs(omega) << " rad/s exceeds no-load speed "
            << motor.no_load_speed;
        throw SpeedViolationError(msg.str());
    }

    const double spoke = cfg.geom.reach();
    SimResult result;
    result.v_ss = std::fabs(omega) * spoke;
    result.normalized_v = normalized_speed(result.v_ss, cfg.body_length);

    // All four spokes share the weight; the support moment (full-spoke lever
    // arm, worst case of the eccentric roll) splits across the leg's two
    // lockstep actuators.
    const double torque = (cfg.mass * cfg.gravity / 4.0) * spoke / 2.0 / efficiency;
    result.stance_torques.push_back(torque);
    result.avg_current = 8.0 * motor_current(motor, torque, omega);
    result.cot = result.v_ss > 0.0
                     ? cost_of_transport({cfg.bus_voltage, result.avg_current, cfg.mass,
                                          cfg.gravity, result.v_ss})
                     : std::numeric_limits<double>::infinity();
    return result;
}

} // namespace miniq
