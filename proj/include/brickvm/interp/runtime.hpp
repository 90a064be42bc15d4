#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "brickvm/device/inputs.hpp"
#include "brickvm/formula/evaluator.hpp"
#include "brickvm/model/project.hpp"
#include "brickvm/physics/world.hpp"

namespace brickvm::interp {

inline constexpr double kFrameSeconds = 1.0 / 60.0;

/// Frames a Wait/Glide of `seconds` suspends for: ceil(seconds × 60), with
/// float noise such as 0.1 × 60 = 6.000000000000001 absorbed.
std::int64_t frames_for(double seconds);

/// Normalizes degrees into (-180, 180].
double normalize_direction(double degrees);

struct Event {
    enum class Kind : std::uint8_t { Haptic, SoundStart, SoundStop, Say, Think, Ask, Diagnostic };
    Kind kind = Kind::Diagnostic;
    std::uint64_t instance = 0;
    double seconds = 0.0;  // haptic duration
    std::string text;      // sound name, bubble text, question or diagnostic

    friend bool operator==(const Event&, const Event&) = default;
};

const char* event_kind_name(Event::Kind kind);
/// `haptic(3,0.02)`, `say(2,"hi")`, `sound_stop(4)`, ...
std::string format_event(const Event& event);

struct DisplayItem {
    std::uint64_t instance = 0;
    std::string object;
    std::string look;   // empty when the object has no looks
    std::string asset;  // archive path of the look image
    double x = 0.0;
    double y = 0.0;
    double direction = 90.0;
    double scale = 1.0;
    double transparency = 0.0;
    double brightness = 100.0;
    bool visible = true;
    int layer = 0;
    std::string bubble;
    bool thinking = false;

    friend bool operator==(const DisplayItem&, const DisplayItem&) = default;
};

struct PenMark {
    enum class Kind : std::uint8_t { Line, Stamp, Clear };
    Kind kind = Kind::Line;
    std::uint64_t instance = 0;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // a stamp sits at (x0, y0)
    double size = 0.0;
    std::uint8_t r = 0, g = 0, b = 0;
    std::string asset;  // stamped look
    double direction = 90.0;
    double scale = 1.0;
    double transparency = 0.0;

    friend bool operator==(const PenMark&, const PenMark&) = default;
};

struct WatchedVariable {
    std::uint64_t owner = 0;  // 0 for globals
    std::string name;
    std::string value;

    friend bool operator==(const WatchedVariable&, const WatchedVariable&) = default;
};

struct FrameResult {
    std::int64_t frame = 0;  // index of the executed frame, or of the next one when not executed
    bool executed = false;   // false while paused or stopped
    bool paused = false;
    bool stopped = false;
    bool axes_visible = false;
    std::string scene;
    std::vector<DisplayItem> display;  // by layer, background first
    std::vector<PenMark> pen;          // marks made during this frame
    std::vector<Event> events;
    std::vector<WatchedVariable> watched;
    std::uint64_t hash = 0;
};

/// `frame=<n> hash=<hex> events=[e1,e2]`
std::string frame_log_line(const FrameResult& result);

/// One executed brick, for scheduling traces.
struct BrickTrace {
    std::int64_t frame = 0;
    std::uint64_t instance = 0;
    std::size_t object = 0;
    std::size_t script = 0;
    std::uint64_t age = 0;  // activation start order
    std::size_t pc = 0;
    model::BrickKind kind = model::BrickKind::Note;
};

struct RuntimeOptions {
    std::uint64_t seed = 0;
    int brick_budget = 10000;
    int max_clones = 300;
    physics::PhysicsConfig physics;
    std::function<void(const BrickTrace&)> trace;
};

/// Mutable state of an object or clone.
struct Instance {
    std::uint64_t id = 0;
    std::size_t scene = 0;
    std::size_t object = 0;
    bool clone = false;
    double x = 0.0;
    double y = 0.0;
    double direction = 90.0;
    double size = 100.0;          // percent
    double transparency = 0.0;    // percent
    double brightness = 100.0;    // percent
    double volume = 100.0;        // percent
    int look = -1;                // index into the object's looks
    bool visible = true;
    std::string bubble;
    bool thinking = false;
    bool pen_down = false;
    double pen_size = 3.15;
    std::uint8_t pen_r = 0, pen_g = 0, pen_b = 255;
    formula::VariableMap locals;
    formula::ListMap local_lists;
};

class Runtime {
public:
    /// Starts the program: first scene active, its WhenProgramStarted scripts
    /// scheduled for frame 0. The project should have passed validation.
    explicit Runtime(model::Project project, RuntimeOptions options = {});
    ~Runtime();
    Runtime(Runtime&&) noexcept;
    Runtime& operator=(Runtime&&) noexcept;

    /// Applies the frame's controls, then (unless paused or stopped) runs
    /// scripts, steps physics and advances the frame counter.
    FrameResult step_frame(const device::FrameInputs& inputs);

    /// Back to the freshly started state with the same seed.
    void restart();

    std::uint64_t hash() const;
    std::int64_t frame() const;  // index of the next frame to execute
    bool paused() const;
    bool stopped() const;
    const model::Project& project() const;
    std::string current_scene() const;

    /// Instances of an object in the current scene: original first, then clones by age.
    std::vector<const Instance*> instances_of(const std::string& object) const;
    const Instance* instance(std::uint64_t id) const;
    std::size_t clone_count() const;
    std::size_t activation_count() const;

    /// Local variable of `who` when it has one, else the global.
    const formula::Value* variable(const std::string& name, const Instance* who = nullptr) const;
    const std::vector<formula::Value>* list(const std::string& name, const Instance* who = nullptr) const;

    const physics::PhysicsWorld& physics() const;  // current scene
    const physics::HullCache& hulls() const;

private:
    struct State;
    std::unique_ptr<State> s_;
};

}  // namespace brickvm::interp
