#include "brickvm/formula/vocabulary.hpp"

#include "brickvm/support/text.hpp"

namespace brickvm::formula {
namespace {

struct Names {
    std::string_view canonical;
    std::string_view snake;
};

constexpr std::array<Names, kSensorCount> kSensors{{
    {"X_INCLINATION", "inclination_x"},
    {"Y_INCLINATION", "inclination_y"},
    {"X_ACCELERATION", "acceleration_x"},
    {"Y_ACCELERATION", "acceleration_y"},
    {"Z_ACCELERATION", "acceleration_z"},
    {"LOUDNESS", "loudness"},
    {"COMPASS_DIRECTION", "compass_direction"},
    {"LATITUDE", "latitude"},
    {"LONGITUDE", "longitude"},
    {"ALTITUDE", "altitude"},
    {"FACE_DETECTED", "face_detected"},
    {"FACE_SIZE", "face_size"},
    {"FACE_X_POSITION", "face_position_x"},
    {"FACE_Y_POSITION", "face_position_y"},
}};

constexpr std::array<Names, kObjectPropertyCount> kProperties{{
    {"OBJECT_X", "position_x"},
    {"OBJECT_Y", "position_y"},
    {"OBJECT_DIRECTION", "direction"},
    {"OBJECT_SIZE", "size"},
    {"OBJECT_TRANSPARENCY", "transparency"},
    {"OBJECT_BRIGHTNESS", "brightness"},
    {"OBJECT_LOOK_NUMBER", "look_number"},
    {"OBJECT_LAYER", "layer"},
}};

}  // namespace

std::string_view canonical_name(Sensor s) { return kSensors[static_cast<std::size_t>(s)].canonical; }
std::string_view canonical_name(ObjectProperty p) { return kProperties[static_cast<std::size_t>(p)].canonical; }
std::string_view snake_name(Sensor s) { return kSensors[static_cast<std::size_t>(s)].snake; }
std::string_view snake_name(ObjectProperty p) { return kProperties[static_cast<std::size_t>(p)].snake; }

std::optional<Sensor> find_sensor(std::string_view name) {
    for (std::size_t i = 0; i < kSensorCount; ++i)
        if (text::iequals(name, kSensors[i].canonical) || text::iequals(name, kSensors[i].snake))
            return static_cast<Sensor>(i);
    return std::nullopt;
}

std::optional<ObjectProperty> find_object_property(std::string_view name) {
    for (std::size_t i = 0; i < kObjectPropertyCount; ++i)
        if (text::iequals(name, kProperties[i].canonical) || text::iequals(name, kProperties[i].snake))
            return static_cast<ObjectProperty>(i);
    return std::nullopt;
}

}  // namespace brickvm::formula
