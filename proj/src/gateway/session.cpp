#include "brickvm/gateway/session.hpp"

#include <charconv>
#include <chrono>
#include <spdlog/spdlog.h>

#include "brickvm/support/hash.hpp"
#include "brickvm/support/text.hpp"

namespace brickvm::gateway {

namespace {

const char* control_name(device::Control c) {
    switch (c) {
        case device::Control::Pause: return "pause";
        case device::Control::Resume: return "resume";
        case device::Control::Restart: return "restart";
        case device::Control::ToggleAxes: return "toggle_axes";
        case device::Control::Stop: return "stop";
    }
    return "?";
}

std::optional<device::Control> find_control(std::string_view name) {
    for (auto c : {device::Control::Pause, device::Control::Resume, device::Control::Restart, device::Control::ToggleAxes, device::Control::Stop})
        if (name == control_name(c)) return c;
    return std::nullopt;
}

double number(std::string_view s) {
    auto v = text::parse_number(s);
    if (!v) throw std::runtime_error("input log: '" + std::string(s) + "' is not a number");
    return *v;
}

interp::RuntimeOptions runtime_options(std::uint64_t seed) {
    interp::RuntimeOptions o;
    o.seed = seed;
    return o;
}

template <class T>
T integer(std::string_view s, int base = 10) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error("input log: bad integer '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string format_step_record(const StepRecord& r) {
    std::string out = "seq=" + std::to_string(r.seq) + " frame=" + std::to_string(r.frame) + " executed=" + (r.executed ? "1" : "0") +
                      " hash=" + hex64(r.hash) + " sensors=";
    for (std::size_t i = 0; i < r.inputs.sensors.size(); ++i) {
        if (i) out += ',';
        out += text::format_number(r.inputs.sensors[i]);
    }
    for (const auto& t : r.inputs.taps) out += " tap=" + text::format_number(t.x) + "," + text::format_number(t.y);
    for (const auto& k : r.inputs.keys) out += " key=" + escape_token(k);
    for (const auto& a : r.inputs.answers) out += " answer=" + escape_token(a);
    for (auto c : r.inputs.controls) out += std::string(" control=") + control_name(c);
    return out;
}

StepRecord parse_step_record(std::string_view line) {
    StepRecord r;
    int seen = 0;
    for (const auto& field : text::split(text::trim(line), ' ')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw std::runtime_error("input log: bad field '" + field + "'");
        std::string_view key = std::string_view(field).substr(0, eq);
        std::string_view value = std::string_view(field).substr(eq + 1);
        if (key == "seq") r.seq = integer<std::uint64_t>(value), seen |= 1;
        else if (key == "frame") r.frame = integer<std::int64_t>(value), seen |= 2;
        else if (key == "executed") r.executed = value == "1", seen |= 4;
        else if (key == "hash") r.hash = integer<std::uint64_t>(value, 16), seen |= 8;
        else if (key == "sensors") {
            auto parts = text::split(value, ',');
            if (parts.size() != formula::kSensorCount) throw std::runtime_error("input log: expected " + std::to_string(formula::kSensorCount) + " sensor values");
            for (std::size_t i = 0; i < parts.size(); ++i) r.inputs.sensors[i] = number(parts[i]);
            seen |= 16;
        } else if (key == "tap") {
            auto parts = text::split(value, ',');
            if (parts.size() != 2) throw std::runtime_error("input log: tap takes x,y");
            r.inputs.taps.push_back({number(parts[0]), number(parts[1])});
        } else if (key == "key") r.inputs.keys.push_back(unescape_token(value));
        else if (key == "answer") r.inputs.answers.push_back(unescape_token(value));
        else if (key == "control") {
            auto c = find_control(value);
            if (!c) throw std::runtime_error("input log: unknown control '" + std::string(value) + "'");
            r.inputs.controls.push_back(*c);
        } else throw std::runtime_error("input log: unknown field '" + std::string(key) + "'");
    }
    if (seen != 31) throw std::runtime_error("input log: record lacks seq, frame, executed, hash or sensors");
    return r;
}

std::vector<StepRecord> parse_input_log(std::string_view text) {
    std::vector<StepRecord> out;
    for (const auto& line : text::split(text, '\n')) {
        if (text::trim(line).empty()) continue;
        out.push_back(parse_step_record(line));
    }
    return out;
}

std::vector<interp::FrameResult> replay(const model::Project& project, std::uint64_t seed, const std::vector<StepRecord>& records) {
    interp::Runtime rt(project, runtime_options(seed));
    std::vector<interp::FrameResult> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(rt.step_frame(r.inputs));
    return out;
}

Session::Session(model::Project project, SessionOptions options)
    : project_(project), options_(std::move(options)), runtime_(std::move(project), runtime_options(options_.seed)) {
    if (!options_.record.empty()) {
        log_.open(options_.record, std::ios::binary | std::ios::trunc);
        if (!log_) throw std::runtime_error("cannot write " + options_.record.string());
    }
}

Session::~Session() { stop_thread(); }

void Session::submit(ClientMessage message) {
    std::lock_guard lock(mutex_);
    if (message.start && !started_) {
        started_ = true;
        wake_.notify_all();
    }
    pending_.push_back({std::move(message.id), std::move(message.events)});
}

Message Session::step() {
    std::vector<Pending> pending;
    {
        std::lock_guard lock(mutex_);
        pending.swap(pending_);
    }
    device::LiveEvents live;
    FrameExtras extras;
    extras.seq = seq_++;
    for (auto& p : pending) {
        live.absorb(std::move(p.events));
        extras.acks.push_back(std::move(p.id));
    }
    if (live.tilt) tilt_ = live.tilt;
    device::LiveEvents sticky, update;
    sticky.sensors = sensors_;
    update.sensors = live.sensors;
    sticky.absorb(std::move(update));
    sensors_ = sticky.sensors;
    live.tilt = tilt_;
    live.sensors = sensors_;

    auto inputs = device::merge_live_input(device::snapshot_at(options_.timeline, runtime_.frame()), live, project_.header.stage_width,
                                           project_.header.stage_height);
    interp::FrameResult result = runtime_.step_frame(inputs);
    extras.gravity_x = runtime_.physics().gravity.x;
    extras.gravity_y = runtime_.physics().gravity.y;

    StepRecord record{extras.seq, result.frame, result.executed, result.hash, std::move(inputs)};
    if (log_) {
        log_ << format_step_record(record) << '\n';
        log_.flush();
    }
    {
        std::lock_guard lock(mutex_);
        records_.push_back(std::move(record));
    }
    return frame_message(result, extras);
}

void Session::start_thread(std::function<void(const Message&)> sink) {
    thread_ = std::thread([this, sink = std::move(sink)] { loop(sink); });
}

void Session::stop_thread() {
    {
        std::lock_guard lock(mutex_);
        quit_ = true;
        wake_.notify_all();
    }
    if (thread_.joinable()) thread_.join();
}

std::vector<StepRecord> Session::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

void Session::loop(std::function<void(const Message&)> sink) {
    {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return started_ || quit_; });
        if (quit_) return;
    }
    spdlog::info("session started");
    using clock = std::chrono::steady_clock;
    const auto tick = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(interp::kFrameSeconds));
    auto next = clock::now();
    while (true) {
        {
            std::lock_guard lock(mutex_);
            if (quit_) break;
        }
        sink(step());
        if (options_.paced) {
            next += tick;
            auto now = clock::now();
            if (next < now - 10 * tick) next = now;  // don't burst to catch up after a stall
            std::unique_lock lock(mutex_);
            wake_.wait_until(lock, next, [&] { return quit_; });
        }
    }
    spdlog::info("session stopped after {} frames", seq_);
}

}  // namespace brickvm::gateway
