#include "miniq/metrics.hpp"

#include "miniq/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace miniq {

namespace {

constexpr std::string_view kHeader = "t_s,roll_deg,pitch_deg,yaw_deg,current_a";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view raw, int line_no) {
    const std::string_view s = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        std::ostringstream msg;
        msg << "telemetry line " << line_no << ": bad number \"" << std::string(raw) << "\"";
        throw ParseError(msg.str());
    }
    return value;
}

// Population standard deviation via Welford's recurrence: exact zero for a
// constant series and insensitive to a constant bias.
class RunningStd {
  public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / n_;
        m2_ += delta * (x - mean_);
    }
    double value() const { return n_ > 0 ? std::sqrt(m2_ / n_) : 0.0; }

  private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace

TelemetryLog load_telemetry(std::istream &in) {
    TelemetryLog log;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty() || content.front() == '#')
            continue;
        if (!header_seen) {
            if (content != kHeader) {
                std::ostringstream msg;
                msg << "telemetry line " << line_no << ": expected header \"" << kHeader
                    << "\"";
                throw ParseError(msg.str());
            }
            header_seen = true;
            continue;
        }
        std::array<std::string_view, 5> fields;
        std::size_t count = 0;
        std::string_view rest = content;
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view field =
                comma == std::string_view::npos ? rest : rest.substr(0, comma);
            if (count < fields.size())
                fields[count] = field;
            ++count;
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (count != fields.size()) {
            std::ostringstream msg;
            msg << "telemetry line " << line_no << ": expected 5 fields, got " << count;
            throw ParseError(msg.str());
        }
        TelemetrySample sample;
        sample.t = parse_field(fields[0], line_no);
        sample.roll = parse_field(fields[1], line_no);
        sample.pitch = parse_field(fields[2], line_no);
        sample.yaw = parse_field(fields[3], line_no);
        sample.current = parse_field(fields[4], line_no);
        if (!log.samples.empty() && !(sample.t > log.samples.back().t)) {
            std::ostringstream msg;
            msg << "telemetry line " << line_no << ": time " << sample.t
                << " s is not strictly increasing";
            throw ParseError(msg.str());
        }
        log.samples.push_back(sample);
    }
    if (!header_seen)
        throw ParseError("telemetry stream has no header row");
    if (log.samples.size() < 2)
        throw EmptyError("telemetry log needs at least 2 samples");
    return log;
}

StabilityReport stability(const TelemetryLog &log) {
    if (log.samples.size() < 2)
        throw EmptyError("stability needs at least 2 samples");
    RunningStd roll, pitch;
    for (const TelemetrySample &s : log.samples) {
        roll.add(s.roll);
        pitch.add(s.pitch);
    }
    return {roll.value(), pitch.value()};
}

double average_current(const TelemetryLog &log) {
    if (log.samples.size() < 2)
        throw EmptyError("average_current needs at least 2 samples");
    const double span = log.samples.back().t - log.samples.front().t;
    if (!(span > 0.0))
        throw InvalidParamsError("telemetry time span must be positive");
    double integral = 0.0;
    for (std::size_t k = 1; k < log.samples.size(); ++k) {
        const TelemetrySample &a = log.samples[k - 1];
        const TelemetrySample &b = log.samples[k];
        integral += (b.t - a.t) * (a.current + b.current) / 2.0;
    }
    return integral / span;
}

double cost_of_transport(const EnergyInput &e) {
    if (!(e.voltage > 0.0) || !(e.mass > 0.0) || !(e.gravity > 0.0) || !(e.avg_current >= 0.0))
        throw InvalidParamsError("COT inputs must be positive (current non-negative)");
    if (!(e.v_ss > 0.0))
        throw ZeroVelocityError("COT is undefined at zero forward speed");
    return e.voltage * e.avg_current / (e.mass * e.gravity * e.v_ss);
}

double normalized_speed(double v, double body_length) {
    if (!(body_length > 0.0))
        throw InvalidParamsError("body length must be positive");
    return v / body_length;
}

} // namespace miniq
