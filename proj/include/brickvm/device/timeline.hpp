#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "brickvm/formula/vocabulary.hpp"

namespace brickvm::device {

inline constexpr double kFramesPerSecond = 60.0;

enum class Interpolation { Step, Linear };

struct Keyframe {
    double time = 0.0;  // seconds
    double value = 0.0;

    friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

struct Track {
    Interpolation mode = Interpolation::Linear;
    std::vector<Keyframe> keys;  // strictly increasing times

    friend bool operator==(const Track&, const Track&) = default;
};

class TimelineError : public std::runtime_error {
public:
    TimelineError(int line, const std::string& message)
        : std::runtime_error("timeline line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Recorded sensor values over time. Sensors without keys read their default (0).
struct SensorTimeline {
    std::map<formula::Sensor, Track> tracks;

    /// Appends a keyframe; throws std::invalid_argument unless `time` is later
    /// than the track's last key and `value` is finite.
    void add(formula::Sensor sensor, double time, double value, Interpolation mode = Interpolation::Linear);

    friend bool operator==(const SensorTimeline&, const SensorTimeline&) = default;
};

/// Text format: one `sensor time value mode` line per keyframe, `#` comments.
SensorTimeline parse_timeline(std::string_view text);
std::string serialize_timeline(const SensorTimeline& timeline);

/// Value of every sensor at t = frame / 60 s. Before the first key a track
/// holds its first value, after the last key its last value. Inclination is
/// clamped to [-90, 90] degrees.
formula::SensorValues snapshot_at(const SensorTimeline& timeline, long frame);

}  // namespace brickvm::device
