#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "brickvm/physics/hull.hpp"
#include "brickvm/support/hash.hpp"

namespace brickvm::physics {

enum class MotionType : std::uint8_t { None, Static, Dynamic };

/// Hull of a look in stage units at 100 % size, centered on the look's middle.
struct Shape {
    std::vector<Vec2> vertices;  // counter-clockwise
};

using BodyId = std::uint64_t;

struct Body {
    MotionType type = MotionType::None;
    double mass = 1.0;
    double bounce = 0.8;    // restitution, [0, 1]
    double friction = 0.2;  // >= 0
    Vec2 position;          // stage units
    Vec2 velocity;          // stage units / second
    double direction = 90.0;  // degrees, 0 = up, clockwise; 90 draws the look unrotated
    double scale = 1.0;
    std::shared_ptr<const Shape> shape;  // null or empty: collides with nothing

    /// Shape vertices in stage coordinates.
    std::vector<Vec2> world_vertices() const;
};

struct Contact {
    BodyId a = 0;
    BodyId b = 0;
    Vec2 normal;  // unit, pointing from a to b
    double depth = 0.0;
};

struct PhysicsConfig {
    /// Fraction of the penetration removed per step.
    double correction = 0.2;
    /// Penetration left in place; deeper overlap is always reduced to this.
    double max_residual = 0.5;
    /// Impacts slower than this (stage units/s) are inelastic, so resting bodies settle.
    double restitution_threshold = 1.0;
};

/// Penetration of two convex polygons by the separating-axis test. Returns
/// false when they are separated or only touch; otherwise fills the
/// minimum-overlap normal (from a to b) and depth.
bool polygon_contact(const std::vector<Vec2>& a, const std::vector<Vec2>& b, Vec2& normal, double& depth);

class PhysicsWorld {
public:
    explicit PhysicsWorld(PhysicsConfig config = {}) : config_(config) {}

    Vec2 gravity;  // stage units / second²
    std::map<BodyId, Body> bodies;

    /// Static bodies lose their velocity; other fields stay.
    void set_motion_type(BodyId id, MotionType type);

    /// One semi-implicit Euler step followed by contact resolution.
    const std::vector<Contact>& step(double dt);

    const std::vector<Contact>& contacts() const { return contacts_; }
    std::vector<Contact> contacts_of(BodyId id) const;

    void hash_into(Fnv1a64& h) const;

    /// Text dump of bodies (with world-space hulls) and the latest contacts.
    std::string trace() const;

private:
    PhysicsConfig config_;
    std::vector<Contact> contacts_;
};

/// Hulls per look, computed once. `computations()` counts actual hull builds.
class HullCache {
public:
    std::shared_ptr<const Shape> get(const std::string& key) const;
    std::shared_ptr<const Shape> build(const std::string& key, const png::Image& image);
    int computations() const { return computations_; }

private:
    std::map<std::string, std::shared_ptr<const Shape>> shapes_;
    int computations_ = 0;
};

}  // namespace brickvm::physics
