#include "miniq/config.hpp"
#include "miniq/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Config-file problems are usage errors (exit 2), unlike domain errors from
// the library modules (exit 1).
struct ConfigFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string &arg, std::size_t n, const char *flag) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= arg.size()) {
        const std::size_t comma = arg.find(',', pos);
        const std::string token =
            arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
            if (used != token.size())
                throw std::invalid_argument(token);
        } catch (const std::exception &) {
            throw CLI::ValidationError(std::string(flag) + ": bad number \"" + token + "\"");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (values.size() != n)
        throw CLI::ValidationError(std::string(flag) + ": expected " + std::to_string(n) +
                                   " comma-separated numbers");
    return values;
}

struct GlobalOpts {
    std::string config_path;
    std::string geom_arg;

    miniq::ToolConfig load() const {
        miniq::ToolConfig cfg;
        try {
            if (!config_path.empty())
                cfg = miniq::load_config_file(config_path);
            else if (std::filesystem::exists("miniq.json"))
                cfg = miniq::load_config_file("miniq.json");
            else
                cfg = miniq::default_config();
        } catch (const miniq::Error &e) {
            throw ConfigFileError(e.what());
        }
        if (!geom_arg.empty()) {
            const auto l = parse_doubles(geom_arg, 2, "--geom");
            cfg.robot.geom = {l[0], l[1]};
            miniq::validate(cfg.robot.geom);
        }
        return cfg;
    }
};

void emit(const json &j) { std::cout << j.dump(2) << "\n"; }

json mat_json(const miniq::Mat2 &m) {
    return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})});
}

miniq::GridSpec make_grid(const std::string &grid_arg, int res, double auto_extent) {
    miniq::GridSpec spec;
    if (grid_arg.empty()) {
        spec.x_min = spec.y_min = -auto_extent;
        spec.x_max = spec.y_max = auto_extent;
    } else {
        const auto g = parse_doubles(grid_arg, 4, "--grid");
        spec.x_min = g[0];
        spec.x_max = g[1];
        spec.y_min = g[2];
        spec.y_max = g[3];
    }
    spec.resolution = res;
    return spec;
}

template <typename Raster> void write_raster(const std::string &path, const Raster &raster) {
    const std::filesystem::path p(path);
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw CLI::ValidationError("--out: cannot open " + path);
    if (p.extension() == ".pgm")
        miniq::save_pgm(out, raster);
    else if (p.extension() == ".csv")
        miniq::save_csv(out, raster);
    else
        throw CLI::ValidationError("--out: raster path must end in .pgm or .csv");
}

void write_trajectory(const std::string &path, const miniq::ActuatorTrajectory &traj) {
    std::ofstream out(path);
    if (!out)
        throw CLI::ValidationError("--out: cannot open " + path);
    miniq::save_trajectory_csv(out, traj);
}

double max_step(const miniq::ActuatorTrajectory &traj) {
    double step = 0.0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
        for (std::size_t l = 0; l < 4; ++l) {
            step = std::max(step, std::fabs(traj.samples[k][l].theta1 -
                                            traj.samples[k - 1][l].theta1));
            step = std::max(step, std::fabs(traj.samples[k][l].theta2 -
                                            traj.samples[k - 1][l].theta2));
        }
    return step;
}

json sim_json(const miniq::SimResult &r) {
    return json{{"v_ss", r.v_ss},
                {"normalized_v", r.normalized_v},
                {"avg_current", r.avg_current},
                {"cot", r.cot}, // +inf serializes as null
                {"stance_torques", r.stance_torques}};
}

struct GaitFlags {
    std::string preset = "fast_trot";
    std::string step_length, step_height, body_height, frequency, duty, phases, elbow;

    void add_to(CLI::App *cmd) {
        cmd->add_option("--preset", preset, "named gait preset from the config")
            ->capture_default_str();
        cmd->add_option("--step-length", step_length, "stance stroke override (m)");
        cmd->add_option("--step-height", step_height, "swing apex override (m)");
        cmd->add_option("--body-height", body_height, "hip height override (m)");
        cmd->add_option("--frequency", frequency, "cycle rate override (Hz)");
        cmd->add_option("--duty", duty, "stance fraction override (0,1)");
        cmd->add_option("--phases", phases, "phase offsets fl,fr,rl,rr");
        cmd->add_option("--elbow", elbow, "elbow branches fl,fr,rl,rr (plus|minus)");
    }

    miniq::GaitParams resolve(const miniq::ToolConfig &cfg) const {
        miniq::GaitParams params = miniq::find_gait(cfg, preset);
        auto num = [](const std::string &s, const char *flag) {
            return parse_doubles(s, 1, flag)[0];
        };
        if (!step_length.empty())
            params.step_length = num(step_length, "--step-length");
        if (!step_height.empty())
            params.step_height = num(step_height, "--step-height");
        if (!body_height.empty())
            params.body_height = num(body_height, "--body-height");
        if (!frequency.empty())
            params.frequency = num(frequency, "--frequency");
        if (!duty.empty())
            params.duty = num(duty, "--duty");
        if (!phases.empty()) {
            const auto ph = parse_doubles(phases, 4, "--phases");
            std::copy(ph.begin(), ph.end(), params.phase_offsets.begin());
        }
        if (!elbow.empty()) {
            std::size_t pos = 0, l = 0;
            while (l < 4) {
                const std::size_t comma = elbow.find(',', pos);
                const std::string token = elbow.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                params.elbow[l++] = miniq::parse_branch(token);
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            if (l == 1)
                params.elbow.fill(params.elbow[0]);
            else if (l != 4)
                throw CLI::ValidationError("--elbow: expected 1 or 4 branches");
        }
        return params;
    }
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"miniq: kinematics, gait synthesis, and locomotion analysis for a "
                 "coupled 2R unbounded-leg quadruped"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--config", global.config_path,
                   "tool config JSON (default ./miniq.json when present)")
        ->envname("MINIQ_CONFIG");
    app.add_option("--geom", global.geom_arg, "override leg geometry as l1,l2 (m)");

    std::string q_arg, theta_arg, target_arg, branch_arg = "plus";
    std::string kind = "serial", grid_arg, out_arg, space = "cartesian";
    int res = 401, samples = 512, cycles = 1;
    double dt = 0.002, omega = 0.0, v_arg = -1.0, efficiency = -1.0;
    std::string pose_arg, log_arg, script_arg;
    GaitFlags synth_flags, sim_flags;

    // --- kinematic queries ---
    auto *fk = app.add_subcommand("fk", "Toe position from joint or actuator angles");
    fk->add_option("--q", q_arg, "joint angles q1,q2 (rad)");
    fk->add_option("--theta", theta_arg, "actuator angles theta1,theta2 (rad)");
    fk->callback([&] {
        if (q_arg.empty() == theta_arg.empty())
            throw CLI::ValidationError("fk: give exactly one of --q or --theta");
        const auto cfg = global.load();
        miniq::FootPoint p;
        if (!q_arg.empty()) {
            const auto q = parse_doubles(q_arg, 2, "--q");
            p = miniq::forward_kinematics(cfg.robot.geom, miniq::JointAngles{q[0], q[1]});
        } else {
            const auto t = parse_doubles(theta_arg, 2, "--theta");
            p = miniq::forward_kinematics(cfg.robot.geom,
                                          miniq::ActuatorAngles{t[0], t[1]});
        }
        emit(json{{"x", p.x}, {"y", p.y}});
    });

    auto *ik = app.add_subcommand("ik", "Joint/actuator angles reaching a toe target");
    ik->add_option("--target", target_arg, "toe target x,y (m)")->required();
    ik->add_option("--branch", branch_arg, "elbow branch")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    ik->callback([&] {
        const auto cfg = global.load();
        const auto t = parse_doubles(target_arg, 2, "--target");
        const auto sol = miniq::inverse_kinematics(cfg.robot.geom, {t[0], t[1]},
                                                   miniq::parse_branch(branch_arg));
        emit(json{{"q1", sol.joints.q1},
                  {"q2", sol.joints.q2},
                  {"theta1", sol.actuators.theta1},
                  {"theta2", sol.actuators.theta2},
                  {"branch", miniq::to_string(sol.branch)},
                  {"d", sol.d}});
    });

    auto *jac = app.add_subcommand("jac", "Joint- and actuator-space Jacobians");
    jac->add_option("--q", q_arg, "joint angles q1,q2 (rad)")->required();
    jac->callback([&] {
        const auto cfg = global.load();
        const auto q = parse_doubles(q_arg, 2, "--q");
        const auto jp = miniq::jacobians(cfg.robot.geom, {q[0], q[1]});
        emit(json{{"j_q", mat_json(jp.j_q)}, {"j_theta", mat_json(jp.j_theta)}});
    });

    auto *manip = app.add_subcommand("manip", "Yoshikawa manipulability at a configuration");
    manip->add_option("--q", q_arg, "joint angles q1,q2 (rad)")->required();
    manip->callback([&] {
        const auto cfg = global.load();
        const auto q = parse_doubles(q_arg, 2, "--q");
        emit(json{{"w", miniq::manipulability(cfg.robot.geom, {q[0], q[1]})}});
    });

    // --- workspace rasters ---
    auto *ws = app.add_subcommand("workspace", "Rasterize a reachable workspace");
    ws->add_option("--kind", kind, "serial | fivebar")
        ->check(CLI::IsMember({"serial", "fivebar"}))
        ->capture_default_str();
    ws->add_option("--grid", grid_arg, "extents xmin,xmax,ymin,ymax (m); default auto");
    ws->add_option("--res", res, "cells per axis")->capture_default_str();
    ws->add_option("--samples", samples, "five-bar joint samples per axis")
        ->capture_default_str();
    ws->add_option("--out", out_arg, "raster output path (.pgm or .csv)");
    ws->callback([&] {
        const auto cfg = global.load();
        miniq::WorkspaceGrid grid;
        if (kind == "serial") {
            const auto spec = make_grid(grid_arg, res, 1.05 * cfg.robot.geom.reach());
            grid = miniq::serial_workspace(cfg.robot.geom, spec);
        } else {
            const double extent = cfg.fivebar.hip_separation / 2.0 + cfg.fivebar.proximal +
                                  cfg.fivebar.distal;
            const auto spec = make_grid(grid_arg, res, 1.05 * extent);
            grid = miniq::fivebar_workspace(cfg.fivebar, spec, samples);
        }
        if (!out_arg.empty())
            write_raster(out_arg, grid);
        json j{{"kind", kind},
               {"resolution", grid.spec.resolution},
               {"cell_area_m2", grid.cell_area},
               {"area_m2", grid.area()}};
        if (!out_arg.empty())
            j["out"] = out_arg;
        emit(j);
    });

    auto *mm = app.add_subcommand("manip-map", "Manipulability field over the workspace");
    mm->add_option("--branch", branch_arg, "elbow branch")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    mm->add_option("--grid", grid_arg, "extents xmin,xmax,ymin,ymax (m); default auto");
    mm->add_option("--res", res, "cells per axis")->capture_default_str();
    mm->add_option("--space", space, "cartesian | joint | actuator sweep")
        ->check(CLI::IsMember({"cartesian", "joint", "actuator"}))
        ->capture_default_str();
    mm->add_option("--samples", samples, "joint samples per axis for swept spaces")
        ->capture_default_str();
    mm->add_option("--out", out_arg, "raster output path (.pgm or .csv)");
    mm->callback([&] {
        const auto cfg = global.load();
        const auto &geom = cfg.robot.geom;
        const auto spec = make_grid(grid_arg, res, 1.05 * geom.reach());
        miniq::ScalarField field;
        if (space == "cartesian")
            field = miniq::manipulability_map(geom, spec, miniq::parse_branch(branch_arg));
        else
            field = miniq::projected_manipulability(geom, spec, samples,
                                                    space == "joint"
                                                        ? miniq::SampleSpace::Joint
                                                        : miniq::SampleSpace::Actuator);
        double peak = 0.0, px = 0.0, py = 0.0;
        for (int j = 0; j < spec.resolution; ++j)
            for (int i = 0; i < spec.resolution; ++i) {
                const double v =
                    field.values[static_cast<std::size_t>(j) * spec.resolution + i];
                if (std::isfinite(v) && v > peak) {
                    peak = v;
                    px = spec.cell_x(i);
                    py = spec.cell_y(j);
                }
            }
        if (!out_arg.empty())
            write_raster(out_arg, field);
        json j{{"space", space},
               {"branch", branch_arg},
               {"resolution", spec.resolution},
               {"peak_w", peak},
               {"peak_x_m", px},
               {"peak_y_m", py},
               {"peak_radius_m", std::hypot(px, py)},
               {"analytic_peak_radius_m", std::hypot(geom.l1, geom.l2)}};
        if (!out_arg.empty())
            j["out"] = out_arg;
        emit(j);
    });

    auto *cmp = app.add_subcommand("compare", "Serial vs. five-bar workspace report");
    cmp->add_option("--grid", grid_arg, "extents xmin,xmax,ymin,ymax (m); default auto");
    cmp->add_option("--res", res, "cells per axis")->capture_default_str();
    cmp->add_option("--samples", samples, "five-bar joint samples per axis")
        ->capture_default_str();
    cmp->callback([&] {
        const auto cfg = global.load();
        const double fb_extent = cfg.fivebar.hip_separation / 2.0 + cfg.fivebar.proximal +
                                 cfg.fivebar.distal;
        const double extent = 1.05 * std::max(cfg.robot.geom.reach(), fb_extent);
        const auto spec = make_grid(grid_arg, res, extent);
        const auto serial = miniq::serial_workspace(cfg.robot.geom, spec);
        const auto fivebar = miniq::fivebar_workspace(cfg.fivebar, spec, samples);
        const auto rep = miniq::compare_workspaces(serial, fivebar);
        emit(json{{"a", "serial"},
                  {"b", "fivebar"},
                  {"area_a_m2", rep.area_a},
                  {"area_b_m2", rep.area_b},
                  {"ratio", rep.ratio},
                  {"b_contained_in_a", rep.b_contained_in_a}});
    });

    // --- gait synthesis ---
    auto *gait = app.add_subcommand("gait", "Gait and trajectory synthesis");
    gait->require_subcommand(1);

    auto *synth = gait->add_subcommand("synth", "Actuator trajectory for a gait or script");
    synth_flags.add_to(synth);
    synth->add_option("--script", script_arg, "keyframe script JSON instead of a preset");
    synth->add_option("--dt", dt, "sample period (s)")->capture_default_str();
    synth->add_option("--cycles", cycles, "gait cycles to emit")->capture_default_str();
    synth->add_option("--out", out_arg, "trajectory CSV output path");
    synth->callback([&] {
        const auto cfg = global.load();
        const auto &geom = cfg.robot.geom;
        miniq::ActuatorTrajectory traj;
        json j;
        if (!script_arg.empty()) {
            std::ifstream in(script_arg);
            if (!in)
                throw miniq::ParseError("cannot open script file: " + script_arg);
            const auto frames = miniq::load_script(in);
            traj = miniq::script_to_actuator(frames, geom, dt, cfg.motor.no_load_speed);
            j["script"] = script_arg;
            j["keyframes"] = frames.size();
        } else {
            const auto params = synth_flags.resolve(cfg);
            const auto spec = miniq::make_gait(params, geom);
            traj = miniq::gait_to_actuator(spec, geom, dt, cycles, cfg.motor.no_load_speed);
            j["name"] = params.name;
            j["v_ss"] = params.step_length * params.frequency / params.duty;
            j["cycles"] = cycles;
        }
        if (!out_arg.empty()) {
            write_trajectory(out_arg, traj);
            j["out"] = out_arg;
        }
        j["dt_s"] = traj.dt;
        j["samples"] = traj.samples.size();
        j["duration_s"] = traj.duration();
        j["max_speed_rad_s"] = traj.dt > 0.0 ? max_step(traj) / traj.dt : 0.0;
        emit(j);
    });

    auto *flip = gait->add_subcommand("flip", "Mirror-stance recovery trajectory");
    flip->add_option("--pose", pose_arg,
                     "current actuator pose fl1,fl2,fr1,fr2,rl1,rl2,rr1,rr2 (rad)")
        ->required();
    flip->add_option("--dt", dt, "sample period (s)")->capture_default_str();
    flip->add_option("--out", out_arg, "trajectory CSV output path");
    flip->callback([&] {
        const auto cfg = global.load();
        const auto v = parse_doubles(pose_arg, 8, "--pose");
        std::array<miniq::ActuatorAngles, 4> pose;
        for (std::size_t l = 0; l < 4; ++l)
            pose[l] = {v[2 * l], v[2 * l + 1]};
        const auto traj = miniq::flip_recovery(pose, dt, cfg.motor.no_load_speed);
        double travel = 0.0;
        if (!traj.samples.empty())
            for (std::size_t l = 0; l < 4; ++l) {
                travel = std::max(travel, std::fabs(traj.samples.back()[l].theta1 -
                                                    traj.samples.front()[l].theta1));
                travel = std::max(travel, std::fabs(traj.samples.back()[l].theta2 -
                                                    traj.samples.front()[l].theta2));
            }
        if (!out_arg.empty())
            write_trajectory(out_arg, traj);
        json j{{"duration_s", traj.duration()},
               {"samples", traj.samples.size()},
               {"max_travel_rad", travel}};
        if (!out_arg.empty())
            j["out"] = out_arg;
        emit(j);
    });

    // --- simulation ---
    auto *sim = app.add_subcommand("sim", "Quasi-static locomotion prediction");
    sim->require_subcommand(1);

    auto *sim_gait = sim->add_subcommand("gait", "Predict v_ss, current, COT for a gait");
    sim_flags.add_to(sim_gait);
    sim_gait->add_option("--efficiency", efficiency, "transmission efficiency override (0,1]");
    sim_gait->callback([&] {
        const auto cfg = global.load();
        const auto params = sim_flags.resolve(cfg);
        const auto spec = miniq::make_gait(params, cfg.robot.geom);
        const double eta =
            efficiency > 0.0 ? efficiency : cfg.transmission_efficiency;
        emit(sim_json(miniq::simulate_gait(spec, cfg.robot, cfg.motor, eta)));
    });

    auto *sim_rotary = sim->add_subcommand("rotary", "Predict rigid-spoke rolling locomotion");
    sim_rotary->add_option("--omega", omega, "actuator speed (rad/s)")->required();
    sim_rotary->add_option("--efficiency", efficiency,
                           "transmission efficiency override (0,1]");
    sim_rotary->callback([&] {
        const auto cfg = global.load();
        const auto cmd = miniq::rotary_command(omega, cfg.robot.geom);
        const double eta =
            efficiency > 0.0 ? efficiency : cfg.transmission_efficiency;
        emit(sim_json(miniq::simulate_rotary(cmd, cfg.robot, cfg.motor, eta)));
    });

    // --- telemetry metrics ---
    auto *metrics = app.add_subcommand("metrics", "Stability, current, and COT from a log");
    metrics->add_option("--log", log_arg, "telemetry CSV path")->required();
    metrics->add_option("--v", v_arg, "steady-state speed (m/s) for COT/normalized speed");
    metrics->callback([&] {
        const auto cfg = global.load();
        std::ifstream in(log_arg);
        if (!in)
            throw miniq::ParseError("cannot open log file: " + log_arg);
        const auto log = miniq::load_telemetry(in);
        const auto stab = miniq::stability(log);
        const double avg = miniq::average_current(log);
        json j{{"samples", log.samples.size()},
               {"duration_s", log.samples.back().t - log.samples.front().t},
               {"roll_std_deg", stab.roll_std},
               {"pitch_std_deg", stab.pitch_std},
               {"avg_current_a", avg}};
        if (v_arg >= 0.0) {
            j["v_ss"] = v_arg;
            j["normalized_v"] = miniq::normalized_speed(v_arg, cfg.robot.body_length);
            j["cot"] = miniq::cost_of_transport(
                {cfg.robot.bus_voltage, avg, cfg.robot.mass, cfg.robot.gravity, v_arg});
        }
        emit(j);
    });

    for (CLI::App *sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (CLI::App *nested : sub->get_subcommands({}))
            nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    } catch (const ConfigFileError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const miniq::Error &e) {
        emit(json{{"error", e.name()}, {"message", e.what()}});
        return 1;
    }
    return 0;
}
