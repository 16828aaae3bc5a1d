#include "miniq/gait.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace miniq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double wrap01(double x) { return x - std::floor(x); }

// Nearest-2pi-multiple shift of raw toward prev.
double unwrap_toward(double raw, double prev) {
    return raw + 2.0 * kPi * std::round((prev - raw) / (2.0 * kPi));
}

void require_paths(const GaitSpec &spec) {
    for (const FootPath &path : spec.foot_path)
        if (!path)
            throw InvalidParamsError("gait spec has an unset foot path");
}

} // namespace

void validate(const GaitParams &params) {
    if (!(params.frequency > 0.0) || !std::isfinite(params.frequency))
        throw InvalidParamsError("gait frequency must be positive");
    if (!(params.duty > 0.0) || !(params.duty < 1.0))
        throw InvalidParamsError("gait duty must lie in (0,1)");
    if (!(params.step_length >= 0.0) || !(params.step_height >= 0.0) ||
        !(params.body_height >= 0.0))
        throw InvalidParamsError("gait step/body dimensions must be non-negative");
    for (double off : params.phase_offsets)
        if (!(off >= 0.0) || !(off < 1.0))
            throw InvalidParamsError("gait phase offsets must lie in [0,1)");
}

GaitSpec make_gait(const GaitParams &params, const LegGeometry &geom) {
    validate(params);
    validate(geom);
    const double half = params.step_length / 2.0;
    const double corner = std::hypot(half, params.body_height);
    if (corner > geom.reach() * (1.0 + 1e-12))
        throw InvalidParamsError("step length exceeds the workspace chord at body_height");
    if (params.body_height < geom.inner_reach())
        throw InvalidParamsError("body_height is inside the inner workspace boundary");

    GaitSpec spec;
    spec.params = params;
    const double length = params.step_length;
    const double height = params.step_height;
    const double body = params.body_height;
    const double duty = params.duty;
    for (int leg = 0; leg < 4; ++leg) {
        const double offset = params.phase_offsets[static_cast<std::size_t>(leg)];
        if (length == 0.0) {
            spec.foot_path[static_cast<std::size_t>(leg)] = [body](double) {
                return FootPoint{0.0, -body};
            };
            continue;
        }
        spec.foot_path[static_cast<std::size_t>(leg)] = [=](double phase) {
            const double p = wrap01(phase - offset);
            if (p < duty) {
                // Stance: straight stroke, front to back, body advancing.
                const double x = length / 2.0 - length * (p / duty);
                return FootPoint{x, -body};
            }
            // Swing: semi-elliptic return arc of apex height `height`.
            const double s = (p - duty) / (1.0 - duty);
            return FootPoint{-(length / 2.0) * std::cos(kPi * s),
                             -body + height * std::sin(kPi * s)};
        };
    }
    return spec;
}

FootPoint sample_foot(const GaitSpec &spec, LegId leg, double phase) {
    require_paths(spec);
    return spec.foot_path[static_cast<std::size_t>(leg)](wrap01(phase));
}

ActuatorTrajectory gait_to_actuator(const GaitSpec &spec, const LegGeometry &geom, double dt,
                                    int cycles, double omega_max,
                                    const std::optional<std::array<ActuatorAngles, 4>> &initial) {
    require_paths(spec);
    validate(geom);
    validate(spec.params);
    if (!(dt > 0.0))
        throw InvalidParamsError("dt must be positive");
    if (cycles < 1)
        throw InvalidParamsError("cycles must be at least 1");
    if (!(omega_max > 0.0))
        throw InvalidParamsError("omega_max must be positive");

    const double period = 1.0 / spec.params.frequency;
    const auto steps = static_cast<std::size_t>(std::llround(cycles * period / dt));

    ActuatorTrajectory traj;
    traj.dt = dt;
    traj.samples.reserve(steps + 1);
    const double bound = omega_max * dt * (1.0 + 1e-9);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double phase = wrap01(k * dt * spec.params.frequency);
        std::array<ActuatorAngles, 4> row;
        for (int leg = 0; leg < 4; ++leg) {
            const auto l = static_cast<std::size_t>(leg);
            const FootPoint target = spec.foot_path[l](phase);
            const IKSolution sol = inverse_kinematics(geom, target, spec.params.elbow[l]);
            ActuatorAngles theta = sol.actuators;
            const ActuatorAngles *prev = nullptr;
            if (k > 0)
                prev = &traj.samples.back()[l];
            else if (initial)
                prev = &(*initial)[l];
            if (prev) {
                theta.theta1 = unwrap_toward(theta.theta1, prev->theta1);
                theta.theta2 = unwrap_toward(theta.theta2, prev->theta2);
            }
            if (k > 0) {
                const double d1 = std::fabs(theta.theta1 - prev->theta1);
                const double d2 = std::fabs(theta.theta2 - prev->theta2);
                if (d1 > bound || d2 > bound) {
                    std::ostringstream msg;
                    msg << "actuator step " << std::max(d1, d2) << " rad at t=" << k * dt
                        << " s (leg " << kLegNames[l] << ") exceeds omega_max*dt = "
                        << omega_max * dt;
                    throw SpeedViolationError(msg.str());
                }
            }
            row[l] = theta;
        }
        traj.samples.push_back(row);
    }
    return traj;
}

RotaryCommand rotary_command(double omega, const LegGeometry &geom) {
    validate(geom);
    if (!std::isfinite(omega))
        throw InvalidParamsError("rotary omega must be finite");
    // Straight leg pointing down; equal channel rates keep q2 frozen.
    return {omega, omega, JointAngles{-kPi / 2.0, 0.0}};
}

ActuatorTrajectory flip_recovery(const std::array<ActuatorAngles, 4> &current, double dt,
                                 double omega_max) {
    if (!(dt > 0.0))
        throw InvalidParamsError("dt must be positive");
    if (!(omega_max > 0.0))
        throw InvalidParamsError("omega_max must be positive");

    // Mirror stance q' = -q, i.e. theta' = -theta; each channel may slide by
    // 2*pi (FK-invariant) to take the shortest route.
    std::array<ActuatorAngles, 4> target;
    double travel = 0.0;
    for (int leg = 0; leg < 4; ++leg) {
        const auto l = static_cast<std::size_t>(leg);
        target[l].theta1 = unwrap_toward(-current[l].theta1, current[l].theta1);
        target[l].theta2 = unwrap_toward(-current[l].theta2, current[l].theta2);
        travel = std::max(travel, std::fabs(target[l].theta1 - current[l].theta1));
        travel = std::max(travel, std::fabs(target[l].theta2 - current[l].theta2));
    }

    ActuatorTrajectory traj;
    traj.dt = dt;
    if (travel == 0.0)
        return traj; // already mirrored

    const double duration = travel / omega_max;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-12));
    if (duration > 0.5 || steps * dt > 0.5 + 1e-12) {
        std::ostringstream msg;
        msg << "flip recovery needs " << duration << " s at omega_max = " << omega_max
            << " rad/s; the 0.5 s budget is unachievable";
        throw SpeedViolationError(msg.str());
    }

    traj.samples.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double alpha = std::min(1.0, k * dt / duration);
        std::array<ActuatorAngles, 4> row;
        for (std::size_t l = 0; l < 4; ++l) {
            row[l].theta1 =
                current[l].theta1 + alpha * (target[l].theta1 - current[l].theta1);
            row[l].theta2 =
                current[l].theta2 + alpha * (target[l].theta2 - current[l].theta2);
        }
        traj.samples.push_back(row);
    }
    return traj;
}

void save_trajectory_csv(std::ostream &out, const ActuatorTrajectory &traj) {
    out << "t_s,fl_t1,fl_t2,fr_t1,fr_t2,rl_t1,rl_t2,rr_t1,rr_t2\n";
    const auto prec = out.precision(12);
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        out << k * traj.dt;
        for (const ActuatorAngles &leg : traj.samples[k])
            out << "," << leg.theta1 << "," << leg.theta2;
        out << "\n";
    }
    out.precision(prec);
}

namespace {

KeyframeTarget parse_target(const nlohmann::json &j) {
    KeyframeTarget target;
    if (j.contains("q")) {
        const auto q = j.at("q");
        if (!q.is_array() || q.size() != 2)
            throw ParseError("keyframe leg target: \"q\" must be [q1, q2]");
        target.kind = KeyframeTarget::Kind::Joint;
        target.q = {q[0].get<double>(), q[1].get<double>()};
    } else if (j.contains("xy")) {
        const auto xy = j.at("xy");
        if (!xy.is_array() || xy.size() != 2)
            throw ParseError("keyframe leg target: \"xy\" must be [x, y]");
        target.kind = KeyframeTarget::Kind::Cartesian;
        target.xy = {xy[0].get<double>(), xy[1].get<double>()};
        const std::string elbow = j.value("elbow", "plus");
        if (elbow == "plus")
            target.elbow = Branch::ElbowPlus;
        else if (elbow == "minus")
            target.elbow = Branch::ElbowMinus;
        else
            throw ParseError("keyframe leg target: elbow must be \"plus\" or \"minus\"");
    } else {
        throw ParseError("keyframe leg target needs \"q\" or \"xy\"");
    }
    return target;
}

ActuatorAngles resolve(const KeyframeTarget &target, const LegGeometry &geom) {
    if (target.kind == KeyframeTarget::Kind::Joint)
        return joint_to_actuator(target.q);
    return inverse_kinematics(geom, target.xy, target.elbow).actuators;
}

} // namespace

std::vector<Keyframe> load_script(std::istream &in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("keyframe script: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw ParseError("keyframe script must be a non-empty JSON array");

    std::vector<Keyframe> frames;
    frames.reserve(doc.size());
    try {
        for (const auto &item : doc) {
            Keyframe frame;
            frame.time_s = item.at("time_s").get<double>();
            const std::string interp = item.value("interpolation", "linear");
            if (interp == "linear")
                frame.interp = Keyframe::Interp::Linear;
            else if (interp == "hold")
                frame.interp = Keyframe::Interp::Hold;
            else
                throw ParseError("keyframe interpolation must be \"linear\" or \"hold\"");
            const auto &legs = item.at("legs");
            for (std::size_t l = 0; l < 4; ++l) {
                if (!legs.contains(kLegNames[l]))
                    throw ParseError(std::string("keyframe is missing leg \"") + kLegNames[l] +
                                     "\"");
                frame.legs[l] = parse_target(legs.at(kLegNames[l]));
            }
            frames.push_back(frame);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("keyframe script: ") + e.what());
    }

    if (std::fabs(frames.front().time_s) > 1e-12)
        throw ParseError("keyframe script must start at time_s = 0");
    frames.front().time_s = 0.0;
    for (std::size_t k = 1; k < frames.size(); ++k)
        if (!(frames[k].time_s > frames[k - 1].time_s))
            throw ParseError("keyframe times must be strictly increasing");
    return frames;
}

ActuatorTrajectory script_to_actuator(const std::vector<Keyframe> &frames,
                                      const LegGeometry &geom, double dt, double omega_max) {
    validate(geom);
    if (frames.empty())
        throw InvalidParamsError("keyframe script is empty");
    if (!(dt > 0.0))
        throw InvalidParamsError("dt must be positive");
    if (!(omega_max > 0.0))
        throw InvalidParamsError("omega_max must be positive");

    // Resolve every keyframe to unwrapped actuator poses first.
    std::vector<std::array<ActuatorAngles, 4>> poses(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        for (std::size_t l = 0; l < 4; ++l) {
            ActuatorAngles theta = resolve(frames[f].legs[l], geom);
            if (f > 0) {
                theta.theta1 = unwrap_toward(theta.theta1, poses[f - 1][l].theta1);
                theta.theta2 = unwrap_toward(theta.theta2, poses[f - 1][l].theta2);
            }
            poses[f][l] = theta;
        }
    }

    // Per-segment ramp start times: linear segments ramp the whole way; hold
    // segments sit at the previous pose and ramp as late as omega_max allows.
    std::vector<double> ramp_start(frames.size(), 0.0);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        double travel = 0.0;
        for (std::size_t l = 0; l < 4; ++l) {
            travel = std::max(travel, std::fabs(poses[f][l].theta1 - poses[f - 1][l].theta1));
            travel = std::max(travel, std::fabs(poses[f][l].theta2 - poses[f - 1][l].theta2));
        }
        const double seg = frames[f].time_s - frames[f - 1].time_s;
        const double need = travel / omega_max;
        if (need > seg * (1.0 + 1e-9)) {
            std::ostringstream msg;
            msg << "keyframe at t=" << frames[f].time_s << " s needs " << need
                << " s of travel at omega_max = " << omega_max << " rad/s";
            throw SpeedViolationError(msg.str());
        }
        ramp_start[f] = frames[f].interp == Keyframe::Interp::Hold
                            ? frames[f].time_s - need
                            : frames[f - 1].time_s;
    }

    const double total = frames.back().time_s;
    const auto steps = static_cast<std::size_t>(std::ceil(total / dt - 1e-12));
    ActuatorTrajectory traj;
    traj.dt = dt;
    traj.samples.reserve(steps + 1);
    std::size_t seg = 1;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = std::min(k * dt, total);
        while (seg < frames.size() - 1 && t > frames[seg].time_s)
            ++seg;
        double alpha;
        if (frames.size() == 1)
            alpha = 0.0;
        else if (t <= ramp_start[seg])
            alpha = 0.0;
        else if (t >= frames[seg].time_s)
            alpha = 1.0;
        else
            alpha = (t - ramp_start[seg]) / (frames[seg].time_s - ramp_start[seg]);
        const auto &from = poses[frames.size() == 1 ? 0 : seg - 1];
        const auto &to = poses[frames.size() == 1 ? 0 : seg];
        std::array<ActuatorAngles, 4> row;
        for (std::size_t l = 0; l < 4; ++l) {
            row[l].theta1 = from[l].theta1 + alpha * (to[l].theta1 - from[l].theta1);
            row[l].theta2 = from[l].theta2 + alpha * (to[l].theta2 - from[l].theta2);
        }
        traj.samples.push_back(row);
    }
    return traj;
}

} // namespace miniq
