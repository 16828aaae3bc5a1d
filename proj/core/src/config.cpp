#include "miniq/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace miniq {

namespace {

using nlohmann::json;

GaitParams preset(const char *name, double length, double height, double body, double freq,
                  double duty, std::array<double, 4> phases) {
    GaitParams p;
    p.step_length = length;
    p.step_height = height;
    p.body_height = body;
    p.frequency = freq;
    p.duty = duty;
    p.phase_offsets = phases;
    p.name = name;
    return p;
}

json branch_array(const std::array<Branch, 4> &elbow) {
    json arr = json::array();
    for (Branch b : elbow)
        arr.push_back(to_string(b));
    return arr;
}

void merge_robot(RobotConfig &robot, const json &j) {
    robot.mass = j.value("mass_kg", robot.mass);
    robot.body_length = j.value("body_length_m", robot.body_length);
    robot.gravity = j.value("gravity_m_s2", robot.gravity);
    robot.bus_voltage = j.value("bus_voltage_v", robot.bus_voltage);
    if (j.contains("leg")) {
        const json &leg = j.at("leg");
        robot.geom.l1 = leg.value("l1_m", robot.geom.l1);
        robot.geom.l2 = leg.value("l2_m", robot.geom.l2);
    }
}

void merge_motor(MotorModel &motor, const json &j) {
    motor.stall_torque = j.value("stall_torque_nm", motor.stall_torque);
    motor.no_load_speed = j.value("no_load_speed_rad_s", motor.no_load_speed);
    motor.no_load_current = j.value("no_load_current_a", motor.no_load_current);
    motor.stall_current = j.value("stall_current_a", motor.stall_current);
}

void merge_fivebar(FiveBarGeometry &fb, const json &j) {
    fb.hip_separation = j.value("hip_separation_m", fb.hip_separation);
    fb.proximal = j.value("proximal_m", fb.proximal);
    fb.distal = j.value("distal_m", fb.distal);
    if (j.contains("left_limits_rad")) {
        const json &lim = j.at("left_limits_rad");
        if (!lim.is_array() || lim.size() != 2)
            throw ParseError("fivebar left_limits_rad must be [min, max]");
        fb.left_min = lim[0].get<double>();
        fb.left_max = lim[1].get<double>();
    }
    if (j.contains("right_limits_rad")) {
        const json &lim = j.at("right_limits_rad");
        if (!lim.is_array() || lim.size() != 2)
            throw ParseError("fivebar right_limits_rad must be [min, max]");
        fb.right_min = lim[0].get<double>();
        fb.right_max = lim[1].get<double>();
    }
}

void merge_gait(GaitParams &params, const json &j) {
    params.step_length = j.value("step_length_m", params.step_length);
    params.step_height = j.value("step_height_m", params.step_height);
    params.body_height = j.value("body_height_m", params.body_height);
    params.frequency = j.value("frequency_hz", params.frequency);
    params.duty = j.value("duty", params.duty);
    if (j.contains("phase_offsets")) {
        const json &ph = j.at("phase_offsets");
        if (!ph.is_array() || ph.size() != 4)
            throw ParseError("gait phase_offsets must be [fl, fr, rl, rr]");
        for (std::size_t l = 0; l < 4; ++l)
            params.phase_offsets[l] = ph[l].get<double>();
    }
    if (j.contains("elbow")) {
        const json &el = j.at("elbow");
        if (!el.is_array() || el.size() != 4)
            throw ParseError("gait elbow must list four branches [fl, fr, rl, rr]");
        for (std::size_t l = 0; l < 4; ++l)
            params.elbow[l] = parse_branch(el[l].get<std::string>());
    }
}

} // namespace

const char *to_string(Branch b) { return b == Branch::ElbowPlus ? "plus" : "minus"; }

Branch parse_branch(const std::string &s) {
    if (s == "plus")
        return Branch::ElbowPlus;
    if (s == "minus")
        return Branch::ElbowMinus;
    throw ParseError("elbow branch must be \"plus\" or \"minus\", got \"" + s + "\"");
}

ToolConfig default_config() {
    ToolConfig cfg;
    const std::array<double, 4> trot{0.0, 0.5, 0.5, 0.0};
    const std::array<double, 4> crawl{0.0, 0.5, 0.25, 0.75};
    cfg.gaits["slow_trot"] = preset("slow_trot", 0.024, 0.010, 0.040, 2.5, 0.5, trot);
    cfg.gaits["fast_trot"] = preset("fast_trot", 0.040, 0.012, 0.032, 5.75, 0.5, trot);
    cfg.gaits["high_trot"] = preset("high_trot", 0.020, 0.008, 0.048, 4.0, 0.5, trot);
    cfg.gaits["crawl"] = preset("crawl", 0.020, 0.010, 0.036, 1.125, 0.75, crawl);
    return cfg;
}

ToolConfig load_config(std::istream &in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("config must be a JSON object");

    ToolConfig cfg = default_config();
    try {
        if (doc.contains("robot"))
            merge_robot(cfg.robot, doc.at("robot"));
        if (doc.contains("motor"))
            merge_motor(cfg.motor, doc.at("motor"));
        if (doc.contains("fivebar"))
            merge_fivebar(cfg.fivebar, doc.at("fivebar"));
        cfg.transmission_efficiency =
            doc.value("transmission_efficiency", cfg.transmission_efficiency);
        if (doc.contains("gaits")) {
            for (const auto &[name, body] : doc.at("gaits").items()) {
                GaitParams params;
                if (auto it = cfg.gaits.find(name); it != cfg.gaits.end())
                    params = it->second;
                params.name = name;
                merge_gait(params, body);
                cfg.gaits[name] = params;
            }
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("config: ") + e.what());
    }

    validate(cfg.robot);
    validate(cfg.motor);
    validate(cfg.fivebar);
    if (!(cfg.transmission_efficiency > 0.0) || cfg.transmission_efficiency > 1.0)
        throw InvalidParamsError("transmission_efficiency must lie in (0, 1]");
    for (const auto &[name, params] : cfg.gaits)
        validate(params);
    return cfg;
}

ToolConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file: " + path);
    return load_config(in);
}

void save_config(std::ostream &out, const ToolConfig &cfg) {
    json doc;
    doc["robot"] = {{"mass_kg", cfg.robot.mass},
                    {"body_length_m", cfg.robot.body_length},
                    {"gravity_m_s2", cfg.robot.gravity},
                    {"bus_voltage_v", cfg.robot.bus_voltage},
                    {"leg", {{"l1_m", cfg.robot.geom.l1}, {"l2_m", cfg.robot.geom.l2}}}};
    doc["motor"] = {{"stall_torque_nm", cfg.motor.stall_torque},
                    {"no_load_speed_rad_s", cfg.motor.no_load_speed},
                    {"no_load_current_a", cfg.motor.no_load_current},
                    {"stall_current_a", cfg.motor.stall_current}};
    doc["fivebar"] = {{"hip_separation_m", cfg.fivebar.hip_separation},
                      {"proximal_m", cfg.fivebar.proximal},
                      {"distal_m", cfg.fivebar.distal},
                      {"left_limits_rad", {cfg.fivebar.left_min, cfg.fivebar.left_max}},
                      {"right_limits_rad", {cfg.fivebar.right_min, cfg.fivebar.right_max}}};
    doc["transmission_efficiency"] = cfg.transmission_efficiency;
    json gaits = json::object();
    for (const auto &[name, p] : cfg.gaits) {
        gaits[name] = {{"step_length_m", p.step_length},
                       {"step_height_m", p.step_height},
                       {"body_height_m", p.body_height},
                       {"frequency_hz", p.frequency},
                       {"duty", p.duty},
                       {"phase_offsets", p.phase_offsets},
                       {"elbow", branch_array(p.elbow)}};
    }
    doc["gaits"] = gaits;
    out << doc.dump(2) << "\n";
}

const GaitParams &find_gait(const ToolConfig &cfg, const std::string &name) {
    const auto it = cfg.gaits.find(name);
    if (it == cfg.gaits.end()) {
        std::ostringstream msg;
        msg << "unknown gait preset \"" << name << "\"; known presets:";
        for (const auto &[known, params] : cfg.gaits)
            msg << " " << known;
        throw InvalidParamsError(msg.str());
    }
    return it->second;
}

} // namespace miniq
