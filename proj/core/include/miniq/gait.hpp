#pragma once

#include "miniq/legkin.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace miniq {

enum class LegId { FL = 0, FR = 1, RL = 2, RR = 3 };

inline constexpr std::array<LegId, 4> kLegs{LegId::FL, LegId::FR, LegId::RL, LegId::RR};
inline constexpr std::array<const char *, 4> kLegNames{"fl", "fr", "rl", "rr"};

struct GaitParams {
    double step_length = 0.040; // m, stance stroke
    double step_height = 0.012; // m, swing apex above stance line
    double body_height = 0.032; // m, hip height above ground
    double frequency = 5.75;    // Hz, full gait cycles per second
    double duty = 0.5;          // stance fraction of the cycle
    std::array<double, 4> phase_offsets{0.0, 0.5, 0.5, 0.0}; // [FL,FR,RL,RR]
    std::array<Branch, 4> elbow{Branch::ElbowPlus, Branch::ElbowPlus, Branch::ElbowPlus,
                                Branch::ElbowPlus};
    std::string name = "fast_trot";
};

// Throws InvalidParams on non-positive frequency, duty outside (0,1),
// negative step dimensions, or phase offsets outside [0,1).
void validate(const GaitParams &params);

// Periodic Cartesian foot curve, phase in [0,1) -> hip-frame toe point.
using FootPath = std::function<FootPoint(double)>;

struct GaitSpec {
    GaitParams params;
    std::array<FootPath, 4> foot_path; // per leg, phase offset baked in
};

// Builds the line-stance / elliptic-arc-swing trajectory family:
// stance sweeps x from +step_length/2 to -step_length/2 at y = -body_height
// over the duty fraction; swing returns along a semi-elliptic arc of apex
// height step_height (a semicircle when step_height = step_length/2). Each
// leg's curve is shifted by its phase offset. Geometry is needed only to
// reject strokes wider than the workspace chord at body_height.
GaitSpec make_gait(const GaitParams &params, const LegGeometry &geom = LegGeometry{});

// Evaluates one leg's curve; phase is wrapped into [0,1) first.
FootPoint sample_foot(const GaitSpec &spec, LegId leg, double phase);

// Position-mode sample stream for all four legs at a fixed period.
struct ActuatorTrajectory {
    double dt = 0.0;
    std::vector<std::array<ActuatorAngles, 4>> samples; // [FL,FR,RL,RR]

    double duration() const { return samples.empty() ? 0.0 : dt * (samples.size() - 1); }
};

// Samples foot_path at dt over `cycles` periods, solves IK with each leg's
// elbow branch, and unwraps every actuator channel by the 2pi multiple
// nearest its previous sample so the series stays continuous — angles wind
// freely and are never reset. The first sample unwraps toward `initial` when
// given. Throws Unreachable for off-workspace samples and SpeedViolation
// when any per-step delta exceeds omega_max * dt.
ActuatorTrajectory gait_to_actuator(const GaitSpec &spec, const LegGeometry &geom, double dt,
                                    int cycles, double omega_max,
                                    const std::optional<std::array<ActuatorAngles, 4>> &initial =
                                        std::nullopt);

// Velocity-mode command: both actuators of every leg spin at omega with a
// straight-leg entry posture, so theta2_rate - theta1_rate = 0 keeps q2 = 0
// and the leg sweeps as a rigid spoke of length l1 + l2.
struct RotaryCommand {
    double theta1_rate = 0.0; // rad/s, all legs
    double theta2_rate = 0.0; // rad/s, all legs
    JointAngles posture;      // at mode entry
};

RotaryCommand rotary_command(double omega, const LegGeometry &geom);

// Shortest-path transition to the elbow-mirrored stance q' = -q (equivalently
// theta' = -theta modulo per-channel 2pi shifts), for resuming gaits after the
// body is flipped upside down. Ramps every channel linearly and finishes
// within 0.5 s; throws SpeedViolation when omega_max cannot meet that.
// An already-mirrored pose yields an empty trajectory.
ActuatorTrajectory flip_recovery(const std::array<ActuatorAngles, 4> &current, double dt,
                                 double omega_max);

// CSV with header t_s,fl_t1,fl_t2,fr_t1,fr_t2,rl_t1,rl_t2,rr_t1,rr_t2 (rad).
void save_trajectory_csv(std::ostream &out, const ActuatorTrajectory &traj);

// Scripted open-loop keyframe sequences (jump, backflip, low crawl, ...).
struct KeyframeTarget {
    enum class Kind { Joint, Cartesian };
    Kind kind = Kind::Joint;
    JointAngles q;                     // when Joint
    FootPoint xy;                      // when Cartesian
    Branch elbow = Branch::ElbowPlus;  // branch for Cartesian IK
};

struct Keyframe {
    enum class Interp { Linear, Hold };
    double time_s = 0.0;
    std::array<KeyframeTarget, 4> legs; // [FL,FR,RL,RR]
    Interp interp = Interp::Linear;     // how to reach this frame from the previous
};

// Parses the keyframe JSON script format (see README). Throws ParseError on
// malformed input, a first keyframe not at t = 0, or non-increasing times.
std::vector<Keyframe> load_script(std::istream &in);

// Converts keyframes to a continuous actuator stream: `linear` segments ramp
// uniformly; `hold` segments stay at the previous pose, then ramp as late as
// omega_max allows while still arriving on time. Cartesian targets go through
// IK and every channel is unwrapped toward its previous value. Throws
// Unreachable or SpeedViolation as applicable.
ActuatorTrajectory script_to_actuator(const std::vector<Keyframe> &frames,
                                      const LegGeometry &geom, double dt, double omega_max);

} // namespace miniq
