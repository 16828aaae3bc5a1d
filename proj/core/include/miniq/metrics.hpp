#pragma once

#include <iosfwd>
#include <vector>

namespace miniq {

struct TelemetrySample {
    double t = 0.0;       // s
    double roll = 0.0;    // deg
    double pitch = 0.0;   // deg
    double yaw = 0.0;     // deg
    double current = 0.0; // A
};

struct TelemetryLog {
    std::vector<TelemetrySample> samples; // t strictly increasing, >= 2 entries
};

struct EnergyInput {
    double voltage = 6.0;    // V
    double avg_current = 0.0; // A
    double mass = 0.240;     // kg
    double gravity = 9.81;   // m/s^2
    double v_ss = 0.0;       // m/s
};

struct StabilityReport {
    double roll_std = 0.0;  // deg
    double pitch_std = 0.0; // deg
};

// Parses telemetry CSV: header `t_s,roll_deg,pitch_deg,yaw_deg,current_a`,
// `#` comment lines and blank lines skipped. Throws ParseError on a bad
// header, wrong field count, non-numeric fields, or non-increasing time;
// Empty when fewer than 2 samples remain.
TelemetryLog load_telemetry(std::istream &in);

// Population standard deviation of the roll and pitch series.
StabilityReport stability(const TelemetryLog &log);

// Time-weighted (trapezoidal) mean of the current series, robust to the
// 15-20 Hz logger jitter. Throws Empty below 2 samples.
double average_current(const TelemetryLog &log);

// COT = V * i / (m * g * v_ss). Throws ZeroVelocity when v_ss <= 0.
double cost_of_transport(const EnergyInput &e);

// Body lengths per second. Throws InvalidParams when body_length <= 0.
double normalized_speed(double v, double body_length);

} // namespace miniq
