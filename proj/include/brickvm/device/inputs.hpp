#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brickvm/formula/vocabulary.hpp"

namespace brickvm::device {

struct Tap {
    double x = 0.0;  // stage units, origin at the center, Y up
    double y = 0.0;

    friend bool operator==(const Tap&, const Tap&) = default;
};

enum class Control : std::uint8_t { Pause, Resume, Restart, ToggleAxes, Stop };

/// Everything the interpreter consumes for one frame.
struct FrameInputs {
    formula::SensorValues sensors{};
    std::vector<Tap> taps;
    std::vector<std::string> keys;
    std::vector<std::string> answers;  // replies to pending Ask bricks, oldest first
    std::vector<Control> controls;

    friend bool operator==(const FrameInputs&, const FrameInputs&) = default;
};

/// Input gathered from a live player between two frames.
struct LiveEvents {
    std::optional<std::pair<double, double>> tilt;  // inclination x/y, degrees
    std::vector<std::pair<formula::Sensor, double>> sensors;
    std::vector<Tap> taps;
    std::vector<std::string> keys;
    std::vector<std::string> answers;
    std::vector<Control> controls;

    bool empty() const {
        return !tilt && sensors.empty() && taps.empty() && keys.empty() && answers.empty() && controls.empty();
    }
    /// Appends `later`; a later tilt or sensor value replaces an earlier one.
    void absorb(LiveEvents later);

    friend bool operator==(const LiveEvents&, const LiveEvents&) = default;
};

/// Precedence live > timeline > default. Taps are clamped into the stage
/// rectangle of the given size.
FrameInputs merge_live_input(const formula::SensorValues& snapshot, const LiveEvents& live, int stage_width, int stage_height);

/// Single-producer queue between a network thread and the frame loop,
/// drained once per frame. Inputs are never dropped.
class LiveInputQueue {
public:
    void push(LiveEvents events) {
        std::lock_guard lock(mutex_);
        pending_.absorb(std::move(events));
    }
    LiveEvents drain() {
        std::lock_guard lock(mutex_);
        return std::exchange(pending_, LiveEvents{});
    }

private:
    std::mutex mutex_;
    LiveEvents pending_;
};

}  // namespace brickvm::device
