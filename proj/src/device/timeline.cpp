#include "brickvm/device/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brickvm/support/text.hpp"

namespace brickvm::device {

using formula::Sensor;

void SensorTimeline::add(Sensor sensor, double time, double value, Interpolation mode) {
    if (!std::isfinite(time) || !std::isfinite(value)) throw std::invalid_argument("keyframe values must be finite");
    Track& track = tracks[sensor];
    if (!track.keys.empty() && !(time > track.keys.back().time))
        throw std::invalid_argument("keyframe times must be strictly increasing");
    if (!track.keys.empty() && track.mode != mode) throw std::invalid_argument("a track has a single interpolation mode");
    track.mode = mode;
    track.keys.push_back({time, value});
}

SensorTimeline parse_timeline(std::string_view text) {
    SensorTimeline tl;
    int line_no = 0;
    for (const auto& raw : text::split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::istringstream in{std::string(line)};
        for (std::string f; in >> f;) fields.push_back(f);
        if (fields.size() != 4) throw TimelineError(line_no, "expected `sensor time value mode`");
        auto sensor = formula::find_sensor(fields[0]);
        if (!sensor) throw TimelineError(line_no, "unknown sensor '" + fields[0] + "'");
        auto time = text::parse_number(fields[1]);
        auto value = text::parse_number(fields[2]);
        if (!time || !value) throw TimelineError(line_no, "time and value must be numbers");
        Interpolation mode;
        if (fields[3] == "step") mode = Interpolation::Step;
        else if (fields[3] == "linear") mode = Interpolation::Linear;
        else throw TimelineError(line_no, "mode must be step or linear");
        try {
            tl.add(*sensor, *time, *value, mode);
        } catch (const std::invalid_argument& e) {
            throw TimelineError(line_no, e.what());
        }
    }
    return tl;
}

std::string serialize_timeline(const SensorTimeline& timeline) {
    std::string out;
    for (const auto& [sensor, track] : timeline.tracks) {
        for (const auto& k : track.keys) {
            out += std::string(formula::snake_name(sensor)) + " " + text::format_number(k.time) + " " +
                   text::format_number(k.value) + " " + (track.mode == Interpolation::Step ? "step" : "linear") + "\n";
        }
    }
    return out;
}

namespace {

double sample(const Track& track, double t) {
    const auto& keys = track.keys;
    if (keys.empty()) return 0.0;
    if (t <= keys.front().time) return keys.front().value;
    if (t >= keys.back().time) return keys.back().value;
    // First key strictly after t; the one before it is at or before t.
    auto hi = std::upper_bound(keys.begin(), keys.end(), t, [](double v, const Keyframe& k) { return v < k.time; });
    auto lo = hi - 1;
    if (track.mode == Interpolation::Step) return lo->value;
    double u = (t - lo->time) / (hi->time - lo->time);
    return lo->value + (hi->value - lo->value) * u;
}

}  // namespace

formula::SensorValues snapshot_at(const SensorTimeline& timeline, long frame) {
    formula::SensorValues values{};
    double t = static_cast<double>(frame) / kFramesPerSecond;
    for (const auto& [sensor, track] : timeline.tracks) values[static_cast<std::size_t>(sensor)] = sample(track, t);
    for (auto s : {Sensor::InclinationX, Sensor::InclinationY}) {
        auto& v = values[static_cast<std::size_t>(s)];
        v = std::clamp(v, -90.0, 90.0);
    }
    return values;
}

}  // namespace brickvm::device
