#include <cstdio>

#include "brickvm/interp/runtime.hpp"
#include "brickvm/support/hash.hpp"
#include "brickvm/support/text.hpp"

namespace brickvm::interp {

const char* event_kind_name(Event::Kind kind) {
    switch (kind) {
        case Event::Kind::Haptic: return "haptic";
        case Event::Kind::SoundStart: return "sound_start";
        case Event::Kind::SoundStop: return "sound_stop";
        case Event::Kind::Say: return "say";
        case Event::Kind::Think: return "think";
        case Event::Kind::Ask: return "ask";
        case Event::Kind::Diagnostic: return "diagnostic";
    }
    return "?";
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += static_cast<char>(c);
        } else if (c == '\n') {
            out += "\\n";
        } else if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else {
            out += static_cast<char>(c);
        }
    }
    return out + "\"";
}

}  // namespace

std::string format_event(const Event& e) {
    std::string out = event_kind_name(e.kind);
    out += '(';
    out += std::to_string(e.instance);
    switch (e.kind) {
        case Event::Kind::Haptic: out += "," + text::format_number(e.seconds); break;
        case Event::Kind::SoundStop: break;
        default: out += "," + quoted(e.text); break;
    }
    return out + ")";
}

std::string frame_log_line(const FrameResult& r) {
    std::string out = "frame=" + std::to_string(r.frame) + " hash=" + hex64(r.hash) + " events=[";
    for (std::size_t i = 0; i < r.events.size(); ++i) {
        if (i) out += ',';
        out += format_event(r.events[i]);
    }
    return out + "]";
}

}  // namespace brickvm::interp
