#include "brickvm/model/bricks.hpp"

#include <stdexcept>
#include <string>

namespace brickvm::model {
namespace {

using enum Category;
using enum Nesting;

constexpr ParamSpec kText(std::string_view n) { return {n, ParamKind::Text}; }
constexpr ParamSpec kVariable{"variable", ParamKind::Variable};
constexpr ParamSpec kList{"list", ParamKind::List};

std::vector<BrickInfo> build_table() {
    using K = BrickKind;
    return {
        {K::Broadcast, "Broadcast", Event, None, "Broadcast {message}", {}, {kText("message")}},
        {K::BroadcastAndWait, "BroadcastAndWait", Event, None, "Broadcast and wait {message}", {}, {kText("message")}},

        {K::Wait, "Wait", Control, None, "Wait {seconds} seconds", {"seconds"}, {}},
        {K::WaitUntil, "WaitUntil", Control, None, "Wait until {condition} is true", {"condition"}, {}},
        {K::Forever, "Forever", Control, OpenLoop, "Forever", {}, {}},
        {K::Repeat, "Repeat", Control, OpenLoop, "Repeat {times} times", {"times"}, {}},
        {K::RepeatUntil, "RepeatUntil", Control, OpenLoop, "Repeat until {condition} is true", {"condition"}, {}},
        {K::EndOfLoop, "EndOfLoop", Control, CloseLoop, "End of loop", {}, {}},
        {K::IfThen, "IfThen", Control, OpenIf, "If {condition} is true then", {"condition"}, {}},
        {K::Else, "Else", Control, Nesting::Else, "Else", {}, {}},
        {K::EndIf, "EndIf", Control, CloseIf, "End if", {}, {}},
        {K::SwitchScene, "SwitchScene", Control, None, "Continue scene {scene}", {}, {kText("scene")}},
        {K::CreateClone, "CreateClone", Control, None, "Create clone of {object}", {}, {kText("object")}},
        {K::DeleteClone, "DeleteClone", Control, None, "Delete this clone", {}, {}},
        {K::StopAllScripts, "StopAllScripts", Control, None, "Stop all scripts", {}, {}},
        {K::StopThisScript, "StopThisScript", Control, None, "Stop this script", {}, {}},
        {K::Vibrate, "Vibrate", Control, None, "Vibrate for {seconds} seconds", {"seconds"}, {}},
        {K::Note, "Note", Control, None, "Note {text}", {}, {kText("text")}},

        {K::PlaceAt, "PlaceAt", Motion, None, "Place at X: {x} Y: {y}", {"x", "y"}, {}},
        {K::SetX, "SetX", Motion, None, "Set X to {x}", {"x"}, {}},
        {K::SetY, "SetY", Motion, None, "Set Y to {y}", {"y"}, {}},
        {K::ChangeXBy, "ChangeXBy", Motion, None, "Change X by {dx}", {"dx"}, {}},
        {K::ChangeYBy, "ChangeYBy", Motion, None, "Change Y by {dy}", {"dy"}, {}},
        {K::MoveSteps, "MoveSteps", Motion, None, "Move {steps} steps", {"steps"}, {}},
        {K::TurnRight, "TurnRight", Motion, None, "Turn right {degrees} degrees", {"degrees"}, {}},
        {K::TurnLeft, "TurnLeft", Motion, None, "Turn left {degrees} degrees", {"degrees"}, {}},
        {K::PointInDirection, "PointInDirection", Motion, None, "Point in direction {degrees} degrees", {"degrees"}, {}},
        {K::GlideTo, "GlideTo", Motion, None, "Glide {seconds} seconds to X: {x} Y: {y}", {"seconds", "x", "y"}, {}},
        {K::IfOnEdgeBounce, "IfOnEdgeBounce", Motion, None, "If on edge bounce", {}, {}},
        {K::ComeToFront, "ComeToFront", Motion, None, "Go to front", {}, {}},
        {K::GoBackLayers, "GoBackLayers", Motion, None, "Go back {layers} layers", {"layers"}, {}},
        {K::SetMotionType, "SetMotionType", Motion, None, "Set motion type to {type}", {}, {{"type", ParamKind::MotionType}}},
        {K::SetGravity, "SetGravity", Motion, None, "Set gravity for all objects to X: {x} Y: {y} steps/second²", {"x", "y"}, {}},
        {K::SetMass, "SetMass", Motion, None, "Set mass to {mass} kilogram", {"mass"}, {}},
        {K::SetVelocity, "SetVelocity", Motion, None, "Set velocity to X: {x} Y: {y} steps/second", {"x", "y"}, {}},
        {K::SetBounceFactor, "SetBounceFactor", Motion, None, "Set bounce factor to {factor}", {"factor"}, {}},
        {K::SetFriction, "SetFriction", Motion, None, "Set friction to {friction}", {"friction"}, {}},

        {K::StartSound, "StartSound", Sound, None, "Start sound {sound}", {}, {kText("sound")}},
        {K::StopAllSounds, "StopAllSounds", Sound, None, "Stop all sounds", {}, {}},
        {K::SetVolume, "SetVolume", Sound, None, "Set volume to {volume} %", {"volume"}, {}},
        {K::ChangeVolumeBy, "ChangeVolumeBy", Sound, None, "Change volume by {delta}", {"delta"}, {}},

        {K::SwitchToLook, "SwitchToLook", Looks, None, "Switch to look {look}", {}, {kText("look")}},
        {K::NextLook, "NextLook", Looks, None, "Next look", {}, {}},
        {K::PreviousLook, "PreviousLook", Looks, None, "Previous look", {}, {}},
        {K::SetSize, "SetSize", Looks, None, "Set size to {size} %", {"size"}, {}},
        {K::ChangeSizeBy, "ChangeSizeBy", Looks, None, "Change size by {delta}", {"delta"}, {}},
        {K::Show, "Show", Looks, None, "Show", {}, {}},
        {K::Hide, "Hide", Looks, None, "Hide", {}, {}},
        {K::SetTransparency, "SetTransparency", Looks, None, "Set transparency to {value} %", {"value"}, {}},
        {K::ChangeTransparencyBy, "ChangeTransparencyBy", Looks, None, "Change transparency by {delta}", {"delta"}, {}},
        {K::SetBrightness, "SetBrightness", Looks, None, "Set brightness to {value} %", {"value"}, {}},
        {K::ChangeBrightnessBy, "ChangeBrightnessBy", Looks, None, "Change brightness by {delta}", {"delta"}, {}},
        {K::Say, "Say", Looks, None, "Say {text}", {"text"}, {}},
        {K::Think, "Think", Looks, None, "Think {text}", {"text"}, {}},
        {K::Ask, "Ask", Looks, None, "Ask {question} and store written answer in {variable}", {"question"}, {kVariable}},

        {K::PenDown, "PenDown", Pen, None, "Pen down", {}, {}},
        {K::PenUp, "PenUp", Pen, None, "Pen up", {}, {}},
        {K::SetPenSize, "SetPenSize", Pen, None, "Set pen size to {size}", {"size"}, {}},
        {K::SetPenColor, "SetPenColor", Pen, None, "Set pen color to Red: {red} Green: {green} Blue: {blue}",
         {"red", "green", "blue"}, {}},
        {K::Stamp, "Stamp", Pen, None, "Stamp", {}, {}},
        {K::ClearPen, "ClearPen", Pen, None, "Clear", {}, {}},

        {K::SetVariable, "SetVariable", Data, None, "Set variable {variable} to {value}", {"value"}, {kVariable}},
        {K::ChangeVariable, "ChangeVariable", Data, None, "Change variable {variable} by {value}", {"value"}, {kVariable}},
        {K::ShowVariable, "ShowVariable", Data, None, "Show variable {variable}", {}, {kVariable}},
        {K::HideVariable, "HideVariable", Data, None, "Hide variable {variable}", {}, {kVariable}},
        {K::AddToList, "AddToList", Data, None, "Add {item} to list {list}", {"item"}, {kList}},
        {K::DeleteFromList, "DeleteFromList", Data, None, "Delete item at {index} from list {list}", {"index"}, {kList}},
        {K::InsertIntoList, "InsertIntoList", Data, None, "Insert {item} into list {list} at position {index}",
         {"item", "index"}, {kList}},
        {K::ReplaceInList, "ReplaceInList", Data, None, "Replace item in list {list} at position {index} with {item}",
         {"index", "item"}, {kList}},
        {K::ClearList, "ClearList", Data, None, "Delete all items of list {list}", {}, {kList}},
    };
}

const std::vector<BrickInfo>& table() {
    static const std::vector<BrickInfo> t = [] {
        auto v = build_table();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (static_cast<std::size_t>(v[i].kind) != i) throw std::logic_error("brick table out of order");
        }
        return v;
    }();
    return t;
}

}  // namespace

std::string_view category_label(Category c) {
    switch (c) {
        case Event: return "EVENT";
        case Control: return "CONTROL";
        case Motion: return "MOTION";
        case Sound: return "SOUND";
        case Looks: return "LOOKS";
        case Pen: return "PEN";
        case Data: return "DATA";
    }
    return "?";
}

std::string_view hat_name(HatKind h) {
    switch (h) {
        case HatKind::WhenProgramStarted: return "WhenProgramStarted";
        case HatKind::WhenTapped: return "WhenTapped";
        case HatKind::WhenBroadcastReceived: return "WhenBroadcastReceived";
        case HatKind::WhenPhysicalCollision: return "WhenPhysicalCollision";
        case HatKind::WhenCloned: return "WhenCloned";
    }
    return "?";
}

std::optional<HatKind> find_hat(std::string_view name) {
    for (auto h : {HatKind::WhenProgramStarted, HatKind::WhenTapped, HatKind::WhenBroadcastReceived,
                   HatKind::WhenPhysicalCollision, HatKind::WhenCloned}) {
        if (hat_name(h) == name) return h;
    }
    return std::nullopt;
}

std::string hat_display(HatKind h, std::string_view message) {
    switch (h) {
        case HatKind::WhenProgramStarted: return "When program started";
        case HatKind::WhenTapped: return "When tapped";
        case HatKind::WhenBroadcastReceived: return "When you receive " + std::string(message);
        case HatKind::WhenPhysicalCollision: return "When physical collision with anything";
        case HatKind::WhenCloned: return "When I start as a clone";
    }
    return "?";
}

const BrickInfo& info(BrickKind kind) { return table().at(static_cast<std::size_t>(kind)); }

const std::vector<BrickInfo>& all_bricks() { return table(); }

std::optional<BrickKind> find_brick(std::string_view name) {
    for (const auto& b : table()) {
        if (b.name == name) return b.kind;
    }
    return std::nullopt;
}

std::string_view motion_type_display(std::string_view type) {
    if (type == kMotionStatic) return "others bounce off it";
    if (type == kMotionDynamic) return "bouncing with gravity";
    return "no physics";
}

}  // namespace brickvm::model
