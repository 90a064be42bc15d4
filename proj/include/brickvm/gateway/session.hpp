#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "brickvm/device/timeline.hpp"
#include "brickvm/gateway/wire.hpp"
#include "brickvm/interp/runtime.hpp"

namespace brickvm::gateway {

/// One stepped frame of a session: what went in and the hash that came out.
struct StepRecord {
    std::uint64_t seq = 0;
    std::int64_t frame = 0;
    bool executed = false;
    std::uint64_t hash = 0;
    device::FrameInputs inputs;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// `seq=<n> frame=<n> executed=<0|1> hash=<hex> sensors=<v,...> [tap=x,y] [key=k] [answer=a] [control=c]`
std::string format_step_record(const StepRecord& record);
StepRecord parse_step_record(std::string_view line);  // throws std::runtime_error
std::vector<StepRecord> parse_input_log(std::string_view text);

/// Feeds the recorded inputs to a fresh runtime; one frame result per record.
std::vector<interp::FrameResult> replay(const model::Project& project, std::uint64_t seed, const std::vector<StepRecord>& records);

struct SessionOptions {
    std::uint64_t seed = 0;
    device::SensorTimeline timeline;
    bool paced = true;               // 60 Hz in the session thread
    std::filesystem::path record;    // input log written as frames are stepped
};

/// Owns the runtime. Network code submits client messages from any thread;
/// the pending queue is drained exactly once per stepped frame. Live tilt and
/// sensor values stay in effect until the client sends new ones.
class Session {
public:
    Session(model::Project project, SessionOptions options);
    ~Session();
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const model::Project& project() const { return project_; }

    void submit(ClientMessage message);

    /// Runs one frame on the calling thread. Don't mix with `start_thread`.
    Message step();

    /// Steps in a background thread once a client has sent control{start};
    /// every frame message goes to `sink`, called on that thread.
    void start_thread(std::function<void(const Message&)> sink);
    void stop_thread();

    bool started() const { return started_; }
    std::vector<StepRecord> records() const;

private:
    struct Pending {
        std::string id;
        device::LiveEvents events;
    };

    void loop(std::function<void(const Message&)> sink);

    const model::Project project_;
    SessionOptions options_;
    interp::Runtime runtime_;
    std::uint64_t seq_ = 0;
    std::optional<std::pair<double, double>> tilt_;
    std::vector<std::pair<formula::Sensor, double>> sensors_;
    std::ofstream log_;

    mutable std::mutex mutex_;
    std::condition_variable wake_;
    std::vector<Pending> pending_;
    std::vector<StepRecord> records_;
    std::atomic<bool> started_ = false;
    bool quit_ = false;
    std::thread thread_;
};

}  // namespace brickvm::gateway
