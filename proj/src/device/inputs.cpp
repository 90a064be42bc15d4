#include "brickvm/device/inputs.hpp"

#include <algorithm>

namespace brickvm::device {

void LiveEvents::absorb(LiveEvents later) {
    if (later.tilt) tilt = later.tilt;
    for (auto& s : later.sensors) {
        auto it = std::find_if(sensors.begin(), sensors.end(), [&](const auto& e) { return e.first == s.first; });
        if (it != sensors.end()) it->second = s.second;
        else sensors.push_back(s);
    }
    auto append = [](auto& into, auto& from) { into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end())); };
    append(taps, later.taps);
    append(keys, later.keys);
    append(answers, later.answers);
    append(controls, later.controls);
}

FrameInputs merge_live_input(const formula::SensorValues& snapshot, const LiveEvents& live, int stage_width, int stage_height) {
    FrameInputs in;
    in.sensors = snapshot;
    for (const auto& [sensor, value] : live.sensors) in.sensors[static_cast<std::size_t>(sensor)] = value;
    if (live.tilt) {
        in.sensors[static_cast<std::size_t>(formula::Sensor::InclinationX)] = std::clamp(live.tilt->first, -90.0, 90.0);
        in.sensors[static_cast<std::size_t>(formula::Sensor::InclinationY)] = std::clamp(live.tilt->second, -90.0, 90.0);
    }
    double hw = stage_width / 2.0, hh = stage_height / 2.0;
    for (const auto& t : live.taps) in.taps.push_back({std::clamp(t.x, -hw, hw), std::clamp(t.y, -hh, hh)});
    in.keys = live.keys;
    in.answers = live.answers;
    in.controls = live.controls;
    return in;
}

}  // namespace brickvm::device
