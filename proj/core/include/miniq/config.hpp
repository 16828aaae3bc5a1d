#pragma once

#include "miniq/gait.hpp"
#include "miniq/sim.hpp"
#include "miniq/workspace.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace miniq {

// Everything the CLI needs, loadable from one JSON file. Fields missing from
// the file keep these defaults, so an absent file degrades to the stock
// toolkit configuration.
struct ToolConfig {
    RobotConfig robot;
    MotorModel motor;
    FiveBarGeometry fivebar;
    double transmission_efficiency = 1.0;
    std::map<std::string, GaitParams> gaits;
};

// "plus" | "minus" names used in config files, scripts, and the CLI.
const char *to_string(Branch b);
Branch parse_branch(const std::string &s); // throws ParseError otherwise

// The built-in configuration: default robot/motor/five-bar parameters plus
// the four named gait presets (slow_trot, fast_trot, high_trot, crawl).
ToolConfig default_config();

// Parses a ToolConfig JSON document (see README for the schema). Throws
// ParseError on malformed JSON or wrong-typed fields; component invariants
// are validated after merging over the defaults.
ToolConfig load_config(std::istream &in);
ToolConfig load_config_file(const std::string &path);

// Serializes the full configuration, defaults included.
void save_config(std::ostream &out, const ToolConfig &cfg);

// Looks up a gait preset by name; throws InvalidParams listing the known
// names when absent.
const GaitParams &find_gait(const ToolConfig &cfg, const std::string &name);

} // namespace miniq
