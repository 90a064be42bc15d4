#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace brickvm::model {

enum class Category : std::uint8_t { Event, Control, Motion, Sound, Looks, Pen, Data };
inline constexpr std::size_t kCategoryCount = 7;

/// Upper-case label used by the statistics export ("EVENT", "LOOKS", ...).
std::string_view category_label(Category c);

enum class HatKind : std::uint8_t { WhenProgramStarted, WhenTapped, WhenBroadcastReceived, WhenPhysicalCollision, WhenCloned };

std::string_view hat_name(HatKind h);
std::optional<HatKind> find_hat(std::string_view name);
/// Code-view line for a hat; `message` fills WhenBroadcastReceived.
std::string hat_display(HatKind h, std::string_view message);

enum class BrickKind : std::uint8_t {
    // Event
    Broadcast,
    BroadcastAndWait,
    // Control
    Wait,
    WaitUntil,
    Forever,
    Repeat,
    RepeatUntil,
    EndOfLoop,
    IfThen,
    Else,
    EndIf,
    SwitchScene,
    CreateClone,
    DeleteClone,
    StopAllScripts,
    StopThisScript,
    Vibrate,
    Note,
    // Motion
    PlaceAt,
    SetX,
    SetY,
    ChangeXBy,
    ChangeYBy,
    MoveSteps,
    TurnRight,
    TurnLeft,
    PointInDirection,
    GlideTo,
    IfOnEdgeBounce,
    ComeToFront,
    GoBackLayers,
    SetMotionType,
    SetGravity,
    SetMass,
    SetVelocity,
    SetBounceFactor,
    SetFriction,
    // Sound
    StartSound,
    StopAllSounds,
    SetVolume,
    ChangeVolumeBy,
    // Looks
    SwitchToLook,
    NextLook,
    PreviousLook,
    SetSize,
    ChangeSizeBy,
    Show,
    Hide,
    SetTransparency,
    ChangeTransparencyBy,
    SetBrightness,
    ChangeBrightnessBy,
    Say,
    Think,
    Ask,
    // Pen
    PenDown,
    PenUp,
    SetPenSize,
    SetPenColor,
    Stamp,
    ClearPen,
    // Data
    SetVariable,
    ChangeVariable,
    ShowVariable,
    HideVariable,
    AddToList,
    DeleteFromList,
    InsertIntoList,
    ReplaceInList,
    ClearList,
};

/// Role of a brick in the flat begin/end block structure of a script.
enum class Nesting : std::uint8_t { None, OpenLoop, CloseLoop, OpenIf, Else, CloseIf };

/// Which kind of name a parameter holds; validation resolves variables and lists.
enum class ParamKind : std::uint8_t { Text, Variable, List, MotionType };

struct ParamSpec {
    std::string_view name;
    ParamKind kind;
};

struct BrickInfo {
    BrickKind kind;
    std::string_view name;  // code.xml spelling
    Category category;
    Nesting nesting;
    /// Code-view text; `{slot}` is replaced by the formula or parameter of that name.
    std::string_view display;
    std::vector<std::string_view> formula_slots;
    std::vector<ParamSpec> params;
};

const BrickInfo& info(BrickKind kind);
const std::vector<BrickInfo>& all_bricks();
std::optional<BrickKind> find_brick(std::string_view name);

inline Category category_of(BrickKind kind) { return info(kind).category; }

/// Values of the SetMotionType `type` parameter.
inline constexpr std::string_view kMotionNone = "none";
inline constexpr std::string_view kMotionStatic = "static";
inline constexpr std::string_view kMotionDynamic = "dynamic";
/// Code-view wording of a motion type ("others bounce off it", ...).
std::string_view motion_type_display(std::string_view type);

}  // namespace brickvm::model
