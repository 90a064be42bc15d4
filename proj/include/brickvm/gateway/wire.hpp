#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brickvm/device/inputs.hpp"
#include "brickvm/interp/runtime.hpp"

namespace brickvm::gateway {

inline constexpr int kProtocolVersion = 1;

/// Malformed or unexpected message; `code` goes into the error reply.
class WireError : public std::runtime_error {
public:
    WireError(std::string code, const std::string& text) : std::runtime_error(text), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// `<len>:<payload>` where the payload is `type=<type>` followed by
/// `key=value` lines. A value is a space-separated list of tokens; inside a
/// token `%`, space, `=` and control characters are written as `%XX`.
struct Message {
    std::string type;
    std::vector<std::pair<std::string, std::vector<std::string>>> fields;  // keys may repeat

    Message& add(std::string key, std::vector<std::string> tokens);
    Message& add(std::string key, std::string token) { return add(std::move(key), std::vector<std::string>{std::move(token)}); }

    const std::vector<std::string>* find(std::string_view key) const;
    std::vector<const std::vector<std::string>*> all(std::string_view key) const;
    /// Single-token field; throws WireError("malformed") when absent.
    const std::string& one(std::string_view key) const;

    friend bool operator==(const Message&, const Message&) = default;
};

std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view token);

std::string encode(const Message& message);
/// Throws WireError("malformed") on framing or syntax errors.
Message decode(std::string_view data);

Message hello_message(const model::Project& project, const std::string& asset_base);
Message error_message(const std::string& code, const std::string& text);

struct FrameExtras {
    std::uint64_t seq = 0;
    double gravity_x = 0.0;
    double gravity_y = 0.0;
    std::vector<std::string> acks;  // ids of the inputs this frame consumed
};
Message frame_message(const interp::FrameResult& frame, const FrameExtras& extras);

/// A decoded client message: one input or control, with the client's id.
struct ClientMessage {
    std::string id;
    bool start = false;  // control{start}
    device::LiveEvents events;
};
/// Accepts `input` (tap x y | key name | tilt ix iy | answer text | sensor name value)
/// and `control` (action = start|pause|resume|restart|toggle_axes|stop).
ClientMessage parse_client_message(const Message& message);

Message input_message(const std::string& id, const std::string& kind, std::vector<std::string> args);
Message control_message(const std::string& id, const std::string& action);

}  // namespace brickvm::gateway
