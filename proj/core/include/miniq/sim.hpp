#pragma once

#include "miniq/gait.hpp"
#include "miniq/legkin.hpp"

#include <vector>

namespace miniq {

struct RobotConfig {
    double mass = 0.240;        // kg
    double body_length = 0.088; // m
    LegGeometry geom;
    double gravity = 9.81;     // m/s^2
    double bus_voltage = 6.0;  // V
};

void validate(const RobotConfig &cfg);

// Affine DC-motor approximation pinned at the datasheet endpoints.
struct MotorModel {
    double stall_torque = 0.228;    // N*m
    double no_load_speed = 47.7;    // rad/s
    double no_load_current = 0.12;  // A
    double stall_current = 1.76;    // A
};

void validate(const MotorModel &motor);

struct SimResult {
    double v_ss = 0.0;          // m/s
    double normalized_v = 0.0;  // body lengths / s
    double avg_current = 0.0;   // A, all motors summed, cycle average
    double cot = 0.0;           // dimensionless; +inf when v_ss = 0
    std::vector<double> stance_torques; // N*m, per sample: max |tau| over stance motors
};

// i = no_load_current + (stall_current - no_load_current) * |torque| / stall_torque.
// The affine fit is torque-only; speed is accepted for interface symmetry but
// does not enter. Throws OverTorque beyond stall.
double motor_current(const MotorModel &motor, double torque, double speed);

// Quasi-static, no-slip flat-ground prediction for one gait cycle:
// v_ss = step_length * frequency / duty exactly (stance phases tile the
// cycle); stance legs split body weight equally; per-leg torques via
// static_torques; per-channel speeds from trajectory differencing; motor
// currents summed over all 8 motors and cycle-averaged; COT per
// V*i/(m*g*v_ss). `efficiency` scales required torque as tau/eta (1 = ideal
// transmission). Throws Unreachable, SpeedViolation (channel speed above
// no_load_speed), InvalidParams when some phase leaves no leg in stance.
SimResult simulate_gait(const GaitSpec &spec, const RobotConfig &cfg, const MotorModel &motor,
                        double efficiency = 1.0);

// Rigid-spoke rolling: v_ss = |omega| * (l1 + l2); all four legs share the
// weight, each leg's support moment (mg/4 at a full-spoke lever arm) splits
// across its two lockstep actuators. Throws SpeedViolation when |omega|
// exceeds no_load_speed.
SimResult simulate_rotary(const RotaryCommand &cmd, const RobotConfig &cfg,
                          const MotorModel &motor, double efficiency = 1.0);

} // namespace miniq
