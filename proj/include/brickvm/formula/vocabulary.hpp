#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace brickvm::formula {

/// Device sensors readable from formulas.
enum class Sensor : std::size_t {
    InclinationX,
    InclinationY,
    AccelerationX,
    AccelerationY,
    AccelerationZ,
    Loudness,
    CompassDirection,
    Latitude,
    Longitude,
    Altitude,
    FaceDetected,
    FaceSize,
    FacePositionX,
    FacePositionY,
};
inline constexpr std::size_t kSensorCount = 14;

/// Properties of the object evaluating the formula.
enum class ObjectProperty : std::size_t {
    PositionX,
    PositionY,
    Direction,
    Size,
    Transparency,
    Brightness,
    LookNumber,
    Layer,
};
inline constexpr std::size_t kObjectPropertyCount = 8;

using SensorValues = std::array<double, kSensorCount>;
using ObjectProperties = std::array<double, kObjectPropertyCount>;

/// Canonical formula token, e.g. "X_INCLINATION".
std::string_view canonical_name(Sensor s);
std::string_view canonical_name(ObjectProperty p);
/// Snake-case name used by timelines and diagnostics, e.g. "inclination_x".
std::string_view snake_name(Sensor s);
std::string_view snake_name(ObjectProperty p);

/// Case-insensitive lookup accepting both the canonical and the snake-case spelling.
std::optional<Sensor> find_sensor(std::string_view name);
std::optional<ObjectProperty> find_object_property(std::string_view name);

}  // namespace brickvm::formula
