#include "brickvm/gateway/wire.hpp"

#include <charconv>
#include <cstdio>

#include "brickvm/support/hash.hpp"
#include "brickvm/support/text.hpp"

namespace brickvm::gateway {

using text::format_number;

Message& Message::add(std::string key, std::vector<std::string> tokens) {
    fields.emplace_back(std::move(key), std::move(tokens));
    return *this;
}

const std::vector<std::string>* Message::find(std::string_view key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

std::vector<const std::vector<std::string>*> Message::all(std::string_view key) const {
    std::vector<const std::vector<std::string>*> out;
    for (const auto& [k, v] : fields)
        if (k == key) out.push_back(&v);
    return out;
}

const std::string& Message::one(std::string_view key) const {
    const auto* v = find(key);
    if (!v || v->size() != 1) throw WireError("malformed", "expected one value for '" + std::string(key) + "'");
    return v->front();
}

std::string escape_token(std::string_view token) {
    std::string out;
    for (char c : token) {
        auto u = static_cast<unsigned char>(c);
        if (c == '%' || c == ' ' || c == '=' || u < 0x20 || u == 0x7f) {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", u);
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

std::string unescape_token(std::string_view token) { return text::percent_unescape(token); }

std::string encode(const Message& m) {
    std::string payload = "type=" + escape_token(m.type) + "\n";
    for (const auto& [key, tokens] : m.fields) {
        payload += key;
        payload += '=';
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) payload += ' ';
            payload += escape_token(tokens[i]);
        }
        payload += '\n';
    }
    return std::to_string(payload.size()) + ":" + payload;
}

namespace {

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

}  // namespace

Message decode(std::string_view data) {
    auto colon = data.find(':');
    if (colon == std::string_view::npos || colon == 0) throw WireError("malformed", "missing length prefix");
    std::size_t length = 0;
    auto [p, ec] = std::from_chars(data.data(), data.data() + colon, length);
    if (ec != std::errc() || p != data.data() + colon) throw WireError("malformed", "bad length prefix");
    std::string_view payload = data.substr(colon + 1);
    if (payload.size() != length) throw WireError("malformed", "length prefix does not match payload");
    if (payload.empty() || payload.back() != '\n') throw WireError("malformed", "payload must end with a newline");
    payload.remove_suffix(1);

    Message m;
    bool first = true;
    for (const auto& line : text::split(payload, '\n')) {
        auto eq = line.find('=');
        if (eq == std::string::npos || !valid_key(std::string_view(line).substr(0, eq)))
            throw WireError("malformed", "bad line '" + line + "'");
        std::string key = line.substr(0, eq);
        std::vector<std::string> tokens;
        for (const auto& t : text::split(std::string_view(line).substr(eq + 1), ' ')) tokens.push_back(unescape_token(t));
        if (first) {
            if (key != "type" || tokens.size() != 1 || tokens[0].empty()) throw WireError("malformed", "first line must be type=<name>");
            m.type = tokens[0];
            first = false;
        } else {
            m.fields.emplace_back(std::move(key), std::move(tokens));
        }
    }
    return m;
}

Message hello_message(const model::Project& project, const std::string& asset_base) {
    Message m{"hello", {}};
    m.add("protocol_version", std::to_string(kProtocolVersion));
    m.add("stage", {std::to_string(project.header.stage_width), std::to_string(project.header.stage_height)});
    m.add("project", project.header.name);
    m.add("assets", asset_base);
    return m;
}

Message error_message(const std::string& code, const std::string& text) {
    Message m{"error", {}};
    m.add("code", code);
    m.add("text", text);
    return m;
}

namespace {

std::string flag(bool b) { return b ? "1" : "0"; }

std::vector<std::string> event_tokens(const interp::Event& e) {
    std::vector<std::string> out{interp::event_kind_name(e.kind), std::to_string(e.instance)};
    if (e.kind == interp::Event::Kind::Haptic) out.push_back(format_number(e.seconds));
    else if (e.kind != interp::Event::Kind::SoundStop) out.push_back(e.text);
    return out;
}

std::vector<std::string> pen_tokens(const interp::PenMark& p) {
    std::string inst = std::to_string(p.instance);
    switch (p.kind) {
        case interp::PenMark::Kind::Line:
            return {"line", inst, format_number(p.x0), format_number(p.y0), format_number(p.x1), format_number(p.y1), format_number(p.size),
                    std::to_string(p.r), std::to_string(p.g), std::to_string(p.b)};
        case interp::PenMark::Kind::Stamp:
            return {"stamp", inst, format_number(p.x0), format_number(p.y0), p.asset, format_number(p.direction), format_number(p.scale),
                    format_number(p.transparency)};
        case interp::PenMark::Kind::Clear: return {"clear", inst};
    }
    return {};
}

}  // namespace

Message frame_message(const interp::FrameResult& f, const FrameExtras& x) {
    Message m{"frame", {}};
    m.add("seq", std::to_string(x.seq));
    m.add("frame", std::to_string(f.frame));
    m.add("executed", flag(f.executed));
    m.add("hash", hex64(f.hash));
    m.add("scene", f.scene);
    m.add("paused", flag(f.paused));
    m.add("stopped", flag(f.stopped));
    m.add("axes_visible", flag(f.axes_visible));
    m.add("gravity", {format_number(x.gravity_x), format_number(x.gravity_y)});
    for (const auto& id : x.acks) m.add("ack", id);
    for (const auto& d : f.display) {
        m.add("item", {std::to_string(d.instance), d.object, d.look, d.asset, format_number(d.x), format_number(d.y), format_number(d.direction),
                       format_number(d.scale), format_number(d.transparency), format_number(d.brightness), flag(d.visible),
                       std::to_string(d.layer), flag(d.thinking), d.bubble});
    }
    for (const auto& e : f.events) m.add("event", event_tokens(e));
    for (const auto& p : f.pen) m.add("pen", pen_tokens(p));
    for (const auto& w : f.watched) m.add("watch", {std::to_string(w.owner), w.name, w.value});
    return m;
}

namespace {

double number_arg(const std::vector<std::string>& args, std::size_t i) {
    auto v = text::parse_number(args.at(i));
    if (!v) throw WireError("malformed", "'" + args[i] + "' is not a number");
    return *v;
}

}  // namespace

ClientMessage parse_client_message(const Message& m) {
    ClientMessage out;
    if (const auto* id = m.find("id"); id && id->size() == 1) out.id = id->front();
    else throw WireError("malformed", "missing id");

    if (m.type == "control") {
        const std::string& action = m.one("action");
        using device::Control;
        if (action == "start") out.start = true;
        else if (action == "pause") out.events.controls.push_back(Control::Pause);
        else if (action == "resume") out.events.controls.push_back(Control::Resume);
        else if (action == "restart") out.events.controls.push_back(Control::Restart);
        else if (action == "toggle_axes") out.events.controls.push_back(Control::ToggleAxes);
        else if (action == "stop") out.events.controls.push_back(Control::Stop);
        else throw WireError("malformed", "unknown control action '" + action + "'");
        return out;
    }
    if (m.type != "input") throw WireError("unknown_type", "unexpected message type '" + m.type + "'");

    int kinds = 0;
    for (const auto& [key, args] : m.fields) {
        if (key == "id") continue;
        ++kinds;
        if (key == "tap") {
            if (args.size() != 2) throw WireError("malformed", "tap takes x y");
            out.events.taps.push_back({number_arg(args, 0), number_arg(args, 1)});
        } else if (key == "tilt") {
            if (args.size() != 2) throw WireError("malformed", "tilt takes ix iy");
            out.events.tilt = std::pair{number_arg(args, 0), number_arg(args, 1)};
        } else if (key == "key") {
            if (args.size() != 1 || args[0].empty()) throw WireError("malformed", "key takes a name");
            out.events.keys.push_back(args[0]);
        } else if (key == "answer") {
            if (args.size() != 1) throw WireError("malformed", "answer takes one text");
            out.events.answers.push_back(args[0]);
        } else if (key == "sensor") {
            if (args.size() != 2) throw WireError("malformed", "sensor takes name value");
            auto s = formula::find_sensor(args[0]);
            if (!s) throw WireError("malformed", "unknown sensor '" + args[0] + "'");
            out.events.sensors.emplace_back(*s, number_arg(args, 1));
        } else {
            throw WireError("malformed", "unknown input kind '" + key + "'");
        }
    }
    if (kinds != 1) throw WireError("malformed", "an input carries exactly one of tap, key, tilt, answer, sensor");
    return out;
}

Message input_message(const std::string& id, const std::string& kind, std::vector<std::string> args) {
    Message m{"input", {}};
    m.add("id", id);
    m.add(kind, std::move(args));
    return m;
}

Message control_message(const std::string& id, const std::string& action) {
    Message m{"control", {}};
    m.add("id", id);
    m.add("action", action);
    return m;
}

}  // namespace brickvm::gateway
