#include "brickvm/physics/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "brickvm/support/text.hpp"

namespace brickvm::physics {

std::vector<Vec2> Body::world_vertices() const {
    std::vector<Vec2> out;
    if (!shape) return out;
    double a = (90.0 - direction) * std::numbers::pi / 180.0;
    double c = std::cos(a), s = std::sin(a);
    out.reserve(shape->vertices.size());
    for (const auto& v : shape->vertices) {
        Vec2 p = v * scale;
        out.push_back({position.x + c * p.x - s * p.y, position.y + s * p.x + c * p.y});
    }
    return out;
}

namespace {

void project(const std::vector<Vec2>& poly, Vec2 axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& p : poly) {
        double d = dot(p, axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
}

Vec2 centroid(const std::vector<Vec2>& poly) {
    Vec2 c;
    for (const auto& p : poly) c += p;
    return c * (1.0 / static_cast<double>(poly.size()));
}

double inverse_mass(const Body& b) { return b.type == MotionType::Dynamic ? 1.0 / b.mass : 0.0; }

}  // namespace

bool polygon_contact(const std::vector<Vec2>& a, const std::vector<Vec2>& b, Vec2& normal, double& depth) {
    if (a.size() < 3 || b.size() < 3) return false;
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_axis;
    for (const auto* poly : {&a, &b}) {
        for (std::size_t i = 0; i < poly->size(); ++i) {
            Vec2 e = (*poly)[(i + 1) % poly->size()] - (*poly)[i];
            double len = std::hypot(e.x, e.y);
            if (len == 0.0) continue;
            Vec2 axis{e.y / len, -e.x / len};  // outward for a counter-clockwise polygon
            double alo, ahi, blo, bhi;
            project(a, axis, alo, ahi);
            project(b, axis, blo, bhi);
            double overlap = std::min(ahi, bhi) - std::max(alo, blo);
            if (overlap <= 0.0) return false;
            if (overlap < best) {
                best = overlap;
                best_axis = axis;
            }
        }
    }
    if (dot(centroid(b) - centroid(a), best_axis) < 0.0) best_axis = -best_axis;
    normal = {best_axis.x + 0.0, best_axis.y + 0.0};  // no negative zeros
    depth = best;
    return true;
}

void PhysicsWorld::set_motion_type(BodyId id, MotionType type) {
    Body& b = bodies.at(id);
    b.type = type;
    if (type == MotionType::Static) b.velocity = {};
}

const std::vector<Contact>& PhysicsWorld::step(double dt) {
    for (auto& [id, b] : bodies) {
        if (b.type != MotionType::Dynamic) continue;
        b.velocity += gravity * dt;
        b.position += b.velocity * dt;
    }

    struct Entry {
        BodyId id;
        Body* body;
        std::vector<Vec2> verts;
        double min_x, max_x, min_y, max_y;
    };
    std::vector<Entry> active;
    for (auto& [id, b] : bodies) {
        if (b.type == MotionType::None || !b.shape || b.shape->vertices.size() < 3) continue;
        Entry e{id, &b, b.world_vertices(), 0, 0, 0, 0};
        e.min_x = e.max_x = e.verts[0].x;
        e.min_y = e.max_y = e.verts[0].y;
        for (const auto& v : e.verts) {
            e.min_x = std::min(e.min_x, v.x);
            e.max_x = std::max(e.max_x, v.x);
            e.min_y = std::min(e.min_y, v.y);
            e.max_y = std::max(e.max_y, v.y);
        }
        active.push_back(std::move(e));
    }
    std::sort(active.begin(), active.end(),
              [](const Entry& l, const Entry& r) { return l.min_x != r.min_x ? l.min_x < r.min_x : l.id < r.id; });

    contacts_.clear();
    for (std::size_t i = 0; i < active.size(); ++i) {
        for (std::size_t j = i + 1; j < active.size() && active[j].min_x <= active[i].max_x; ++j) {
            const Entry* p = &active[i];
            const Entry* q = &active[j];
            if (p->max_y < q->min_y || q->max_y < p->min_y) continue;
            if (p->body->type != MotionType::Dynamic && q->body->type != MotionType::Dynamic) continue;
            if (q->id < p->id) std::swap(p, q);
            Contact c{p->id, q->id, {}, 0.0};
            if (polygon_contact(p->verts, q->verts, c.normal, c.depth)) contacts_.push_back(c);
        }
    }
    std::sort(contacts_.begin(), contacts_.end(),
              [](const Contact& l, const Contact& r) { return l.a != r.a ? l.a < r.a : l.b < r.b; });

    for (const auto& c : contacts_) {
        Body& a = bodies.at(c.a);
        Body& b = bodies.at(c.b);
        double ia = inverse_mass(a), ib = inverse_mass(b);
        double total = ia + ib;
        if (total == 0.0) continue;

        Vec2 rel = b.velocity - a.velocity;
        double vn = dot(rel, c.normal);
        if (vn < 0.0) {
            double e = -vn >= config_.restitution_threshold ? a.bounce * b.bounce : 0.0;
            double j = -(1.0 + e) * vn / total;
            // Friction removes a share of the relative sliding velocity.
            Vec2 tangent = rel - c.normal * vn;
            double k = std::min(1.0, std::sqrt(a.friction * b.friction));
            // Immovable sides are left untouched, down to the sign of zero.
            if (ia > 0.0) a.velocity += tangent * (k * ia / total) - c.normal * (j * ia);
            if (ib > 0.0) b.velocity += c.normal * (j * ib) - tangent * (k * ib / total);
        }

        double push = std::max(config_.correction * c.depth, c.depth - config_.max_residual);
        if (push > 0.0) {
            if (ia > 0.0) a.position -= c.normal * (push * ia / total);
            if (ib > 0.0) b.position += c.normal * (push * ib / total);
        }
    }
    return contacts_;
}

std::vector<Contact> PhysicsWorld::contacts_of(BodyId id) const {
    std::vector<Contact> out;
    for (const auto& c : contacts_) {
        if (c.a == id || c.b == id) out.push_back(c);
    }
    return out;
}

void PhysicsWorld::hash_into(Fnv1a64& h) const {
    h.f64(gravity.x);
    h.f64(gravity.y);
    h.u64(bodies.size());
    for (const auto& [id, b] : bodies) {
        h.u64(id);
        h.byte(static_cast<std::uint8_t>(b.type));
        for (double v : {b.mass, b.bounce, b.friction, b.position.x, b.position.y, b.velocity.x, b.velocity.y, b.direction, b.scale})
            h.f64(v);
    }
    h.u64(contacts_.size());
    for (const auto& c : contacts_) {
        h.u64(c.a);
        h.u64(c.b);
    }
}

std::string PhysicsWorld::trace() const {
    static constexpr const char* kTypes[] = {"none", "static", "dynamic"};
    std::string out = "gravity " + text::format_number(gravity.x) + " " + text::format_number(gravity.y) + "\n";
    for (const auto& [id, b] : bodies) {
        out += "body " + std::to_string(id) + " " + kTypes[static_cast<int>(b.type)] + " pos " + text::format_number(b.position.x) + " " +
               text::format_number(b.position.y) + " vel " + text::format_number(b.velocity.x) + " " + text::format_number(b.velocity.y) + " hull";
        for (const auto& v : b.world_vertices()) out += " (" + text::format_number(v.x) + " " + text::format_number(v.y) + ")";
        out += "\n";
    }
    for (const auto& c : contacts_) {
        out += "contact " + std::to_string(c.a) + " " + std::to_string(c.b) + " normal " + text::format_number(c.normal.x) + " " +
               text::format_number(c.normal.y) + " depth " + text::format_number(c.depth) + "\n";
    }
    return out;
}

std::shared_ptr<const Shape> HullCache::get(const std::string& key) const {
    auto it = shapes_.find(key);
    return it == shapes_.end() ? nullptr : it->second;
}

std::shared_ptr<const Shape> HullCache::build(const std::string& key, const png::Image& image) {
    if (auto s = get(key)) return s;
    ++computations_;
    auto hull = compute_convex_hull(AlphaMask::from_image(image));
    auto shape = std::make_shared<Shape>();
    double cx = image.width / 2.0, cy = image.height / 2.0;
    for (const auto& v : hull.vertices) shape->vertices.push_back({static_cast<double>(v.x) - cx, static_cast<double>(v.y) - cy});
    shapes_[key] = shape;
    return shape;
}

}  // namespace brickvm::physics
