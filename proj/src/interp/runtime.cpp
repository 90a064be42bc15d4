#include "brickvm/interp/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "brickvm/support/png.hpp"
#include "brickvm/support/text.hpp"

namespace brickvm::interp {

using formula::Value;
using model::BrickKind;
using model::HatKind;
using physics::Vec2;

std::int64_t frames_for(double seconds) {
    if (!(seconds > 0.0) || !std::isfinite(seconds)) return 0;
    return static_cast<std::int64_t>(std::ceil(seconds * 60.0 - 1e-9));
}

double normalize_direction(double degrees) {
    if (!std::isfinite(degrees)) return 90.0;
    double d = std::fmod(degrees, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d + 0.0;
}

namespace {

struct Activation {
    enum class Mode : std::uint8_t { Ready, Waiting, Gliding, BroadcastWait, Asking, Done };
    struct Awaited {
        std::uint64_t instance;
        std::size_t script;
        std::uint64_t age;
    };

    std::uint64_t instance = 0;
    std::size_t script = 0;
    std::uint64_t age = 0;
    std::size_t pc = 0;
    std::vector<std::pair<std::size_t, std::int64_t>> loops;  // (loop brick, repeats left; -1 = unbounded)
    Mode mode = Mode::Ready;
    bool ran = false;  // took its turn this frame
    std::int64_t resume_frame = 0;
    Vec2 glide_from, glide_to;
    std::int64_t glide_total = 0;
    std::int64_t glide_done = 0;
    std::vector<Awaited> awaited;
    std::string ask_variable;
    std::uint64_t ask_order = 0;

    void reset(std::uint64_t new_age) {
        Activation fresh;
        fresh.instance = instance;
        fresh.script = script;
        fresh.age = new_age;
        fresh.ran = ran;
        *this = std::move(fresh);
    }
};

struct Trigger {
    std::uint64_t instance;
    HatKind hat;
};

struct SceneState {
    explicit SceneState(physics::PhysicsConfig config) : world(config) {}

    bool started = false;
    std::map<std::uint64_t, Instance> instances;  // id order is creation order
    std::vector<std::uint64_t> z_order;           // everything but the background, bottom to top
    std::vector<std::unique_ptr<Activation>> activations;
    physics::PhysicsWorld world;
    std::vector<Trigger> pending;  // hats that start next frame
};

enum class Flow { Next, Yield, Stop };

void hash_value(Fnv1a64& h, const Value& v) {
    if (v.is_number()) {
        h.byte(0);
        h.f64(v.number());
    } else if (v.is_text()) {
        h.byte(1);
        h.str(v.text());
    } else {
        h.byte(2);
        h.boolean(v.boolean());
    }
}

void hash_variables(Fnv1a64& h, const formula::VariableMap& vars, const formula::ListMap& lists) {
    h.u64(vars.size());
    for (const auto& [name, v] : vars) {
        h.str(name);
        hash_value(h, v);
    }
    h.u64(lists.size());
    for (const auto& [name, items] : lists) {
        h.str(name);
        h.u64(items.size());
        for (const auto& v : items) hash_value(h, v);
    }
}

// Exact unit vectors on the axes so that moving right never drifts in y.
Vec2 heading(double direction) {
    double d = normalize_direction(direction);
    if (d == 0.0) return {0, 1};
    if (d == 90.0) return {1, 0};
    if (d == 180.0) return {0, -1};
    if (d == -90.0) return {-1, 0};
    double r = d * std::numbers::pi / 180.0;
    return {std::sin(r), std::cos(r)};
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

std::uint8_t color_channel(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(finite_or_zero(v)), 0.0, 255.0)); }

bool point_in_convex(const std::vector<Vec2>& poly, Vec2 p) {
    if (poly.size() < 3) return false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Vec2 a = poly[i];
        Vec2 b = poly[(i + 1) % poly.size()];
        if (physics::cross(b - a, p - a) < 0.0) return false;
    }
    return true;
}

}  // namespace

struct Runtime::State {
    model::Project project;
    RuntimeOptions options;
    physics::HullCache hulls;
    std::map<const model::Script*, std::vector<std::size_t>> jumps;

    std::vector<SceneState> scenes;
    std::size_t current = 0;
    formula::VariableMap globals;
    formula::ListMap global_lists;
    formula::Random random;
    std::int64_t frame = 0;
    std::uint64_t next_instance = 1;
    std::uint64_t next_age = 1;
    std::uint64_t next_ask = 1;
    bool paused = false;
    bool stopped = false;
    bool axes = false;
    std::vector<std::pair<std::uint64_t, std::string>> watched;
    std::uint64_t pen_hash = Fnv1a64::kOffset;
    std::uint64_t pen_count = 0;

    formula::SensorValues sensors{};
    std::vector<Event> events;
    std::vector<PenMark> pen;

    State(model::Project p, RuntimeOptions o) : project(std::move(p)), options(std::move(o)) {
        for (const auto& scene : project.scenes) {
            for (const auto& object : scene.objects) {
                for (const auto& look : object.looks) {
                    auto it = project.assets.find(look.file);
                    if (it == project.assets.end() || hulls.get(look.file)) continue;
                    try {
                        hulls.build(look.file, png::decode(it->second));
                    } catch (const png::PngError&) {
                    }
                }
                for (const auto& script : object.scripts) jumps[&script] = match_blocks(script);
            }
        }
        reset();
    }

    static std::vector<std::size_t> match_blocks(const model::Script& script) {
        std::size_t n = script.bricks.size();
        std::vector<std::size_t> jump(n, n);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < n; ++i) {
            switch (model::info(script.bricks[i].kind).nesting) {
                case model::Nesting::OpenLoop:
                case model::Nesting::OpenIf: stack.push_back(i); break;
                case model::Nesting::Else:
                    if (!stack.empty()) {
                        jump[stack.back()] = i;
                        stack.back() = i;
                    }
                    break;
                case model::Nesting::CloseLoop:
                case model::Nesting::CloseIf:
                    if (!stack.empty()) {
                        std::size_t open = stack.back();
                        stack.pop_back();
                        jump[open] = i;
                        jump[i] = open;
                    }
                    break;
                case model::Nesting::None: break;
            }
        }
        return jump;
    }

    void reset() {
        scenes.clear();
        for (std::size_t i = 0; i < project.scenes.size(); ++i) scenes.emplace_back(options.physics);
        current = 0;
        globals = project.global_variables;
        global_lists = project.global_lists;
        random = formula::Random(options.seed);
        frame = 0;
        next_instance = next_age = next_ask = 1;
        paused = stopped = false;
        watched.clear();
        pen_hash = Fnv1a64::kOffset;
        pen_count = 0;
        events.clear();
        pen.clear();
        if (!scenes.empty()) enter_scene(0);
    }

    // --- lookup ---------------------------------------------------------

    SceneState& scene() { return scenes[current]; }
    const SceneState& scene() const { return scenes[current]; }

    const model::SpriteObject& object_of(const Instance& inst) const { return project.scenes[inst.scene].objects[inst.object]; }

    Instance* find_instance(std::uint64_t id) {
        auto& map = scene().instances;
        auto it = map.find(id);
        return it == map.end() ? nullptr : &it->second;
    }

    const model::Look* look_of(const Instance& inst) const {
        const auto& looks = object_of(inst).looks;
        if (inst.look < 0 || static_cast<std::size_t>(inst.look) >= looks.size()) return nullptr;
        return &looks[static_cast<std::size_t>(inst.look)];
    }

    std::shared_ptr<const physics::Shape> shape_of(const Instance& inst) const {
        const auto* look = look_of(inst);
        return look ? hulls.get(look->file) : nullptr;
    }

    std::vector<Vec2> outline(const Instance& inst) const {
        physics::Body b;
        b.position = {inst.x, inst.y};
        b.direction = inst.direction;
        b.scale = inst.size / 100.0;
        b.shape = shape_of(inst);
        return b.world_vertices();
    }

    int layer_of(const SceneState& sc, const Instance& inst) const {
        auto it = std::find(sc.z_order.begin(), sc.z_order.end(), inst.id);
        return it == sc.z_order.end() ? 0 : static_cast<int>(it - sc.z_order.begin()) + 1;
    }

    std::tuple<std::size_t, std::size_t, std::uint64_t> order_key(const Activation& a) const {
        const auto& map = scene().instances;
        auto it = map.find(a.instance);
        return {it == map.end() ? 0 : it->second.object, a.script, a.age};
    }

    // --- events ---------------------------------------------------------

    void diagnostic(std::uint64_t instance, std::string text) {
        events.push_back({Event::Kind::Diagnostic, instance, 0.0, std::move(text)});
    }

    void add_pen(PenMark m) {
        Fnv1a64 h;
        h.u64(pen_hash);
        h.byte(static_cast<std::uint8_t>(m.kind));
        h.u64(m.instance);
        for (double v : {m.x0, m.y0, m.x1, m.y1, m.size, m.direction, m.scale, m.transparency}) h.f64(v);
        h.byte(m.r);
        h.byte(m.g);
        h.byte(m.b);
        h.str(m.asset);
        pen_hash = h.value();
        ++pen_count;
        pen.push_back(std::move(m));
    }

    void move_to(Instance& inst, double x, double y) {
        x = finite_or_zero(x);
        y = finite_or_zero(y);
        if (inst.pen_down && (x != inst.x || y != inst.y)) {
            PenMark m;
            m.instance = inst.id;
            m.x0 = inst.x;
            m.y0 = inst.y;
            m.x1 = x;
            m.y1 = y;
            m.size = inst.pen_size;
            m.r = inst.pen_r;
            m.g = inst.pen_g;
            m.b = inst.pen_b;
            add_pen(std::move(m));
        }
        inst.x = x;
        inst.y = y;
    }

    // --- instances and scripts ------------------------------------------

    std::uint64_t create_instance(std::size_t scene_index, std::size_t object) {
        auto& sc = scenes[scene_index];
        const auto& obj = project.scenes[scene_index].objects[object];
        Instance inst;
        inst.id = next_instance++;
        inst.scene = scene_index;
        inst.object = object;
        inst.look = obj.looks.empty() ? -1 : 0;
        inst.locals = obj.local_variables;
        inst.local_lists = obj.local_lists;
        sc.world.bodies[inst.id] = physics::Body{};
        if (object != 0) sc.z_order.push_back(inst.id);
        std::uint64_t id = inst.id;
        sc.instances.emplace(id, std::move(inst));
        return id;
    }

    void enter_scene(std::size_t index) {
        current = index;
        auto& sc = scenes[index];
        if (sc.started) return;
        sc.started = true;
        std::vector<std::uint64_t> ids;
        for (std::size_t i = 0; i < project.scenes[index].objects.size(); ++i) ids.push_back(create_instance(index, i));
        for (auto id : ids) trigger(id, HatKind::WhenProgramStarted);
    }

    /// (Re)starts one script of an instance in the current scene.
    Activation& start_script(std::uint64_t instance, std::size_t script) {
        auto& list = scene().activations;
        for (auto& a : list) {
            if (a->instance == instance && a->script == script) {
                a->reset(next_age++);
                return *a;
            }
        }
        auto a = std::make_unique<Activation>();
        a->instance = instance;
        a->script = script;
        a->age = next_age++;
        list.push_back(std::move(a));
        return *list.back();
    }

    std::vector<Activation::Awaited> trigger(std::uint64_t instance, HatKind hat, std::string_view message = {}) {
        std::vector<Activation::Awaited> started;
        const Instance* inst = find_instance(instance);
        if (!inst) return started;
        const auto& scripts = object_of(*inst).scripts;
        for (std::size_t i = 0; i < scripts.size(); ++i) {
            if (scripts[i].hat != hat) continue;
            if (hat == HatKind::WhenBroadcastReceived && scripts[i].message != message) continue;
            auto& a = start_script(instance, i);
            started.push_back({instance, i, a.age});
        }
        return started;
    }

    bool has_hat(const Instance& inst, HatKind hat) const {
        for (const auto& s : object_of(inst).scripts) {
            if (s.hat == hat) return true;
        }
        return false;
    }

    std::vector<Activation::Awaited> broadcast(std::string_view message) {
        std::vector<std::uint64_t> ids;
        for (const auto& [id, inst] : scene().instances) ids.push_back(id);
        std::vector<Activation::Awaited> all;
        for (auto id : ids) {
            auto started = trigger(id, HatKind::WhenBroadcastReceived, message);
            all.insert(all.end(), started.begin(), started.end());
        }
        return all;
    }

    bool finished(const Activation::Awaited& w) const {
        for (const auto& a : scene().activations) {
            if (a->instance == w.instance && a->script == w.script && a->age == w.age) return a->mode == Activation::Mode::Done;
        }
        return true;
    }

    void delete_instance(std::uint64_t id) {
        auto& sc = scene();
        for (auto& a : sc.activations) {
            if (a->instance == id) a->mode = Activation::Mode::Done;
        }
        std::erase(sc.z_order, id);
        sc.world.bodies.erase(id);
        std::erase_if(sc.pending, [&](const Trigger& t) { return t.instance == id; });
        std::erase_if(watched, [&](const auto& w) { return w.first == id; });
        sc.instances.erase(id);
    }

    std::size_t live_clones() const {
        std::size_t n = 0;
        for (const auto& sc : scenes)
            for (const auto& [id, inst] : sc.instances) n += inst.clone ? 1 : 0;
        return n;
    }

    void create_clone(Instance& caller, const std::string& target) {
        auto& sc = scene();
        const Instance* source = nullptr;
        if (object_of(caller).name == target) {
            source = &caller;
        } else {
            for (const auto& [id, inst] : sc.instances) {
                if (!inst.clone && object_of(inst).name == target) {
                    source = &inst;
                    break;
                }
            }
        }
        if (!source) return diagnostic(caller.id, "unknown object " + target);
        if (live_clones() >= static_cast<std::size_t>(options.max_clones)) return diagnostic(caller.id, "clone limit reached");
        Instance copy = *source;
        copy.id = next_instance++;
        copy.clone = true;
        sc.world.bodies[copy.id] = sc.world.bodies.at(source->id);
        if (copy.object != 0) {
            auto it = std::find(sc.z_order.begin(), sc.z_order.end(), source->id);
            sc.z_order.insert(it, copy.id);  // directly behind its source
        }
        std::uint64_t id = copy.id;
        sc.instances.emplace(id, std::move(copy));
        sc.pending.push_back({id, HatKind::WhenCloned});
    }

    // --- formulas ---------------------------------------------------------

    Value eval(const model::Brick& brick, const std::string& slot, Instance& inst) {
        auto it = brick.formulas.find(slot);
        if (it == brick.formulas.end()) return Value(0.0);
        formula::EvalContext ctx;
        using P = formula::ObjectProperty;
        auto set = [&](P p, double v) { ctx.object[static_cast<std::size_t>(p)] = v; };
        set(P::PositionX, inst.x);
        set(P::PositionY, inst.y);
        set(P::Direction, inst.direction);
        set(P::Size, inst.size);
        set(P::Transparency, inst.transparency);
        set(P::Brightness, inst.brightness);
        set(P::LookNumber, inst.look + 1);
        set(P::Layer, layer_of(scene(), inst));
        ctx.sensors = sensors;
        ctx.local_variables = &inst.locals;
        ctx.global_variables = &globals;
        ctx.local_lists = &inst.local_lists;
        ctx.global_lists = &global_lists;
        ctx.random = &random;
        std::uint64_t id = inst.id;
        ctx.diagnostic = [this, id](const std::string& msg) { diagnostic(id, msg); };
        return formula::evaluate(it->second, ctx);
    }

    double num(const model::Brick& brick, const std::string& slot, Instance& inst) {
        return finite_or_zero(eval(brick, slot, inst).as_number());
    }

    Value* variable_slot(Instance& inst, const std::string& name) {
        if (auto it = inst.locals.find(name); it != inst.locals.end()) return &it->second;
        if (auto it = globals.find(name); it != globals.end()) return &it->second;
        return nullptr;
    }

    std::vector<Value>* list_slot(Instance& inst, const std::string& name) {
        if (auto it = inst.local_lists.find(name); it != inst.local_lists.end()) return &it->second;
        if (auto it = global_lists.find(name); it != global_lists.end()) return &it->second;
        return nullptr;
    }

    static std::string param(const model::Brick& brick, const char* name) {
        auto it = brick.params.find(name);
        return it == brick.params.end() ? std::string() : it->second;
    }

    // --- motion helpers ---------------------------------------------------

    void bounce_off_edges(Instance& inst) {
        double half_w = project.header.stage_width / 2.0;
        double half_h = project.header.stage_height / 2.0;
        double lo_x = inst.x, hi_x = inst.x, lo_y = inst.y, hi_y = inst.y;
        for (const auto& v : outline(inst)) {
            lo_x = std::min(lo_x, v.x);
            hi_x = std::max(hi_x, v.x);
            lo_y = std::min(lo_y, v.y);
            hi_y = std::max(hi_y, v.y);
        }
        Vec2 dir = heading(inst.direction);
        double x = inst.x, y = inst.y, d = inst.direction;
        if (hi_x > half_w) {
            x -= hi_x - half_w;
            if (dir.x > 0) d = -d;
        } else if (lo_x < -half_w) {
            x += -half_w - lo_x;
            if (dir.x < 0) d = -d;
        }
        if (hi_y > half_h) {
            y -= hi_y - half_h;
            if (dir.y > 0) d = 180.0 - d;
        } else if (lo_y < -half_h) {
            y += -half_h - lo_y;
            if (dir.y < 0) d = 180.0 - d;
        }
        inst.direction = normalize_direction(d);
        move_to(inst, x, y);
    }

    void set_look(Instance& inst, int index) {
        int n = static_cast<int>(object_of(inst).looks.size());
        if (n == 0) return;
        inst.look = ((index % n) + n) % n;
    }

    // --- execution --------------------------------------------------------

    Flow exec(Activation& a, Instance& inst, const model::Script& script) {
        const model::Brick& b = script.bricks[a.pc];
        const auto& jump = jumps.at(&script);
        auto& sc = scene();
        auto& body = sc.world.bodies[inst.id];
        std::size_t here = a.pc++;
        switch (b.kind) {
            case BrickKind::Broadcast: broadcast(param(b, "message")); return Flow::Next;
            case BrickKind::BroadcastAndWait: {
                std::uint64_t age = a.age;
                auto started = broadcast(param(b, "message"));
                if (a.age != age) return Flow::Yield;  // restarted by its own message
                if (started.empty()) return Flow::Next;
                a.awaited = std::move(started);
                a.mode = Activation::Mode::BroadcastWait;
                return Flow::Yield;
            }
            case BrickKind::Wait:
                a.resume_frame = frame + std::max<std::int64_t>(1, frames_for(num(b, "seconds", inst)));
                a.mode = Activation::Mode::Waiting;
                return Flow::Yield;
            case BrickKind::WaitUntil:
                if (eval(b, "condition", inst).as_bool()) return Flow::Next;
                a.pc = here;
                return Flow::Yield;
            case BrickKind::Forever: a.loops.push_back({here, -1}); return Flow::Next;
            case BrickKind::Repeat: {
                double times = std::round(num(b, "times", inst));
                if (times < 1.0) {
                    a.pc = jump[here] + 1;
                    return Flow::Next;
                }
                a.loops.push_back({here, static_cast<std::int64_t>(std::min(times, 9.0e18))});
                return Flow::Next;
            }
            case BrickKind::RepeatUntil:
                if (eval(b, "condition", inst).as_bool()) {
                    a.pc = jump[here] + 1;
                    return Flow::Next;
                }
                a.loops.push_back({here, -1});
                return Flow::Next;
            case BrickKind::EndOfLoop: {
                std::size_t open = jump[here];
                while (!a.loops.empty() && a.loops.back().first != open) a.loops.pop_back();
                if (a.loops.empty() || open >= script.bricks.size()) return Flow::Yield;
                BrickKind loop = script.bricks[open].kind;
                if (loop == BrickKind::Forever) {
                    a.pc = open + 1;
                } else if (loop == BrickKind::Repeat) {
                    if (--a.loops.back().second > 0) {
                        a.pc = open + 1;
                    } else {
                        a.loops.pop_back();
                    }
                } else {
                    a.loops.pop_back();
                    a.pc = open;  // the condition is checked again next frame
                }
                return Flow::Yield;
            }
            case BrickKind::IfThen:
                if (!eval(b, "condition", inst).as_bool()) a.pc = jump[here] + 1;
                return Flow::Next;
            case BrickKind::Else: a.pc = jump[here] + 1; return Flow::Next;
            case BrickKind::EndIf: return Flow::Next;
            case BrickKind::SwitchScene: {
                std::string name = param(b, "scene");
                for (std::size_t i = 0; i < project.scenes.size(); ++i) {
                    if (project.scenes[i].name != name) continue;
                    if (i == current) return Flow::Next;
                    enter_scene(i);
                    return Flow::Yield;
                }
                diagnostic(inst.id, "unknown scene " + name);
                return Flow::Next;
            }
            case BrickKind::CreateClone: create_clone(inst, param(b, "object")); return Flow::Next;
            case BrickKind::DeleteClone:
                if (!inst.clone) return Flow::Next;
                delete_instance(inst.id);
                return Flow::Stop;
            case BrickKind::StopAllScripts:
                for (auto& s : scenes)
                    for (auto& other : s.activations) other->mode = Activation::Mode::Done;
                return Flow::Stop;
            case BrickKind::StopThisScript: a.mode = Activation::Mode::Done; return Flow::Stop;
            case BrickKind::Vibrate:
                events.push_back({Event::Kind::Haptic, inst.id, std::max(0.0, num(b, "seconds", inst)), {}});
                return Flow::Next;
            case BrickKind::Note: return Flow::Next;

            case BrickKind::PlaceAt: {
                double x = num(b, "x", inst);
                double y = num(b, "y", inst);
                move_to(inst, x, y);
                return Flow::Next;
            }
            case BrickKind::SetX: move_to(inst, num(b, "x", inst), inst.y); return Flow::Next;
            case BrickKind::SetY: move_to(inst, inst.x, num(b, "y", inst)); return Flow::Next;
            case BrickKind::ChangeXBy: move_to(inst, inst.x + num(b, "dx", inst), inst.y); return Flow::Next;
            case BrickKind::ChangeYBy: move_to(inst, inst.x, inst.y + num(b, "dy", inst)); return Flow::Next;
            case BrickKind::MoveSteps: {
                double steps = num(b, "steps", inst);
                Vec2 d = heading(inst.direction);
                move_to(inst, inst.x + steps * d.x, inst.y + steps * d.y);
                return Flow::Next;
            }
            case BrickKind::TurnRight: inst.direction = normalize_direction(inst.direction + num(b, "degrees", inst)); return Flow::Next;
            case BrickKind::TurnLeft: inst.direction = normalize_direction(inst.direction - num(b, "degrees", inst)); return Flow::Next;
            case BrickKind::PointInDirection: inst.direction = normalize_direction(num(b, "degrees", inst)); return Flow::Next;
            case BrickKind::GlideTo: {
                double seconds = num(b, "seconds", inst);
                Vec2 to{num(b, "x", inst), num(b, "y", inst)};
                std::int64_t n = frames_for(seconds);
                if (n == 0) {
                    move_to(inst, to.x, to.y);
                    return Flow::Next;
                }
                a.glide_from = {inst.x, inst.y};
                a.glide_to = to;
                a.glide_total = n;
                a.glide_done = 0;
                a.mode = Activation::Mode::Gliding;
                return Flow::Yield;
            }
            case BrickKind::IfOnEdgeBounce: bounce_off_edges(inst); return Flow::Next;
            case BrickKind::ComeToFront:
                if (inst.object != 0) {
                    std::erase(sc.z_order, inst.id);
                    sc.z_order.push_back(inst.id);
                }
                return Flow::Next;
            case BrickKind::GoBackLayers:
                if (inst.object != 0) {
                    auto layers = static_cast<std::int64_t>(std::round(num(b, "layers", inst)));
                    auto pos = std::find(sc.z_order.begin(), sc.z_order.end(), inst.id) - sc.z_order.begin();
                    std::int64_t target = std::clamp<std::int64_t>(pos - layers, 0, static_cast<std::int64_t>(sc.z_order.size()) - 1);
                    std::erase(sc.z_order, inst.id);
                    sc.z_order.insert(sc.z_order.begin() + target, inst.id);
                }
                return Flow::Next;
            case BrickKind::SetMotionType: {
                std::string type = param(b, "type");
                physics::MotionType t = type == model::kMotionStatic    ? physics::MotionType::Static
                                        : type == model::kMotionDynamic ? physics::MotionType::Dynamic
                                                                        : physics::MotionType::None;
                sc.world.set_motion_type(inst.id, t);
                return Flow::Next;
            }
            case BrickKind::SetGravity: {
                double x = num(b, "x", inst);
                double y = num(b, "y", inst);
                sc.world.gravity = {x, y};
                return Flow::Next;
            }
            case BrickKind::SetMass: {
                double mass = num(b, "mass", inst);
                if (mass > 0.0) {
                    body.mass = mass;
                } else {
                    diagnostic(inst.id, "mass must be positive");
                }
                return Flow::Next;
            }
            case BrickKind::SetVelocity: {
                double x = num(b, "x", inst);
                double y = num(b, "y", inst);
                if (body.type != physics::MotionType::Static) body.velocity = {x, y};
                return Flow::Next;
            }
            case BrickKind::SetBounceFactor: body.bounce = std::clamp(num(b, "factor", inst), 0.0, 1.0); return Flow::Next;
            case BrickKind::SetFriction: body.friction = std::max(0.0, num(b, "friction", inst)); return Flow::Next;

            case BrickKind::StartSound: {
                std::string name = param(b, "sound");
                const auto& sounds = object_of(inst).sounds;
                if (std::none_of(sounds.begin(), sounds.end(), [&](const auto& s) { return s.name == name; })) {
                    diagnostic(inst.id, "unknown sound " + name);
                } else {
                    events.push_back({Event::Kind::SoundStart, inst.id, 0.0, name});
                }
                return Flow::Next;
            }
            case BrickKind::StopAllSounds: events.push_back({Event::Kind::SoundStop, inst.id, 0.0, {}}); return Flow::Next;
            case BrickKind::SetVolume: inst.volume = std::clamp(num(b, "volume", inst), 0.0, 100.0); return Flow::Next;
            case BrickKind::ChangeVolumeBy: inst.volume = std::clamp(inst.volume + num(b, "delta", inst), 0.0, 100.0); return Flow::Next;

            case BrickKind::SwitchToLook: {
                std::string name = param(b, "look");
                const auto& looks = object_of(inst).looks;
                auto it = std::find_if(looks.begin(), looks.end(), [&](const auto& l) { return l.name == name; });
                if (it == looks.end()) {
                    diagnostic(inst.id, "unknown look " + name);
                } else {
                    inst.look = static_cast<int>(it - looks.begin());
                }
                return Flow::Next;
            }
            case BrickKind::NextLook: set_look(inst, inst.look + 1); return Flow::Next;
            case BrickKind::PreviousLook: set_look(inst, inst.look - 1); return Flow::Next;
            case BrickKind::SetSize: inst.size = std::max(0.0, num(b, "size", inst)); return Flow::Next;
            case BrickKind::ChangeSizeBy: inst.size = std::max(0.0, inst.size + num(b, "delta", inst)); return Flow::Next;
            case BrickKind::Show: inst.visible = true; return Flow::Next;
            case BrickKind::Hide: inst.visible = false; return Flow::Next;
            case BrickKind::SetTransparency: inst.transparency = std::clamp(num(b, "value", inst), 0.0, 100.0); return Flow::Next;
            case BrickKind::ChangeTransparencyBy:
                inst.transparency = std::clamp(inst.transparency + num(b, "delta", inst), 0.0, 100.0);
                return Flow::Next;
            case BrickKind::SetBrightness: inst.brightness = std::clamp(num(b, "value", inst), 0.0, 200.0); return Flow::Next;
            case BrickKind::ChangeBrightnessBy:
                inst.brightness = std::clamp(inst.brightness + num(b, "delta", inst), 0.0, 200.0);
                return Flow::Next;
            case BrickKind::Say:
            case BrickKind::Think: {
                inst.bubble = eval(b, "text", inst).as_text();
                inst.thinking = b.kind == BrickKind::Think;
                events.push_back({inst.thinking ? Event::Kind::Think : Event::Kind::Say, inst.id, 0.0, inst.bubble});
                return Flow::Next;
            }
            case BrickKind::Ask:
                events.push_back({Event::Kind::Ask, inst.id, 0.0, eval(b, "question", inst).as_text()});
                a.ask_variable = param(b, "variable");
                a.ask_order = next_ask++;
                a.mode = Activation::Mode::Asking;
                return Flow::Yield;

            case BrickKind::PenDown: inst.pen_down = true; return Flow::Next;
            case BrickKind::PenUp: inst.pen_down = false; return Flow::Next;
            case BrickKind::SetPenSize: inst.pen_size = std::max(0.0, num(b, "size", inst)); return Flow::Next;
            case BrickKind::SetPenColor: {
                double r = num(b, "red", inst);
                double g = num(b, "green", inst);
                double bl = num(b, "blue", inst);
                inst.pen_r = color_channel(r);
                inst.pen_g = color_channel(g);
                inst.pen_b = color_channel(bl);
                return Flow::Next;
            }
            case BrickKind::Stamp: {
                const auto* look = look_of(inst);
                if (look && inst.visible) {
                    PenMark m;
                    m.kind = PenMark::Kind::Stamp;
                    m.instance = inst.id;
                    m.x0 = m.x1 = inst.x;
                    m.y0 = m.y1 = inst.y;
                    m.asset = look->file;
                    m.direction = inst.direction;
                    m.scale = inst.size / 100.0;
                    m.transparency = inst.transparency;
                    add_pen(std::move(m));
                }
                return Flow::Next;
            }
            case BrickKind::ClearPen: {
                PenMark m;
                m.kind = PenMark::Kind::Clear;
                m.instance = inst.id;
                add_pen(std::move(m));
                return Flow::Next;
            }

            case BrickKind::SetVariable:
            case BrickKind::ChangeVariable: {
                std::string name = param(b, "variable");
                Value v = eval(b, "value", inst);
                Value* slot = variable_slot(inst, name);
                if (!slot) {
                    diagnostic(inst.id, "unknown variable " + name);
                } else if (b.kind == BrickKind::SetVariable) {
                    *slot = std::move(v);
                } else {
                    *slot = Value(finite_or_zero(slot->as_number() + v.as_number()));
                }
                return Flow::Next;
            }
            case BrickKind::ShowVariable:
            case BrickKind::HideVariable: {
                std::string name = param(b, "variable");
                std::uint64_t owner = inst.locals.contains(name) ? inst.id : 0;
                std::pair<std::uint64_t, std::string> key{owner, name};
                std::erase(watched, key);
                if (b.kind == BrickKind::ShowVariable) watched.push_back(std::move(key));
                return Flow::Next;
            }
            case BrickKind::AddToList:
            case BrickKind::DeleteFromList:
            case BrickKind::InsertIntoList:
            case BrickKind::ReplaceInList:
            case BrickKind::ClearList: {
                std::string name = param(b, "list");
                auto* list = list_slot(inst, name);
                if (!list) {
                    diagnostic(inst.id, "unknown list " + name);
                    return Flow::Next;
                }
                auto index = [&] { return std::round(num(b, "index", inst)); };
                if (b.kind == BrickKind::AddToList) {
                    list->push_back(eval(b, "item", inst));
                } else if (b.kind == BrickKind::DeleteFromList) {
                    double i = index();
                    if (i >= 1 && i <= static_cast<double>(list->size())) list->erase(list->begin() + static_cast<std::ptrdiff_t>(i - 1));
                } else if (b.kind == BrickKind::InsertIntoList) {
                    Value item = eval(b, "item", inst);
                    double i = index();
                    if (i >= 1 && i <= static_cast<double>(list->size()) + 1)
                        list->insert(list->begin() + static_cast<std::ptrdiff_t>(i - 1), std::move(item));
                } else if (b.kind == BrickKind::ReplaceInList) {
                    double i = index();
                    Value item = eval(b, "item", inst);
                    if (i >= 1 && i <= static_cast<double>(list->size())) (*list)[static_cast<std::size_t>(i - 1)] = std::move(item);
                } else {
                    list->clear();
                }
                return Flow::Next;
            }
        }
        return Flow::Next;
    }

    bool runnable(const Activation& a) const {
        switch (a.mode) {
            case Activation::Mode::Ready:
            case Activation::Mode::Gliding: return true;
            case Activation::Mode::Waiting: return frame >= a.resume_frame;
            case Activation::Mode::BroadcastWait:
                return std::all_of(a.awaited.begin(), a.awaited.end(), [&](const auto& w) { return finished(w); });
            case Activation::Mode::Asking:
            case Activation::Mode::Done: return false;
        }
        return false;
    }

    void run_turn(Activation& a) {
        Instance* inst = find_instance(a.instance);
        if (!inst) {
            a.mode = Activation::Mode::Done;
            return;
        }
        if (a.mode == Activation::Mode::Gliding) {
            ++a.glide_done;
            double t = static_cast<double>(a.glide_done) / static_cast<double>(a.glide_total);
            if (a.glide_done >= a.glide_total) {
                move_to(*inst, a.glide_to.x, a.glide_to.y);
                a.mode = Activation::Mode::Ready;
            } else {
                move_to(*inst, a.glide_from.x + (a.glide_to.x - a.glide_from.x) * t, a.glide_from.y + (a.glide_to.y - a.glide_from.y) * t);
                return;
            }
        }
        if (a.mode == Activation::Mode::Waiting || a.mode == Activation::Mode::BroadcastWait) {
            a.mode = Activation::Mode::Ready;
            a.awaited.clear();
        }
        const auto& script = object_of(*inst).scripts[a.script];
        std::size_t scene_index = current;
        std::uint64_t id = inst->id;
        for (int executed = 0;;) {
            if (a.mode != Activation::Mode::Ready) return;
            if (a.pc >= script.bricks.size()) {
                a.mode = Activation::Mode::Done;
                return;
            }
            if (++executed > options.brick_budget) {
                diagnostic(id, "brick budget exceeded");
                return;
            }
            if (options.trace) options.trace({frame, id, inst->object, a.script, a.age, a.pc, script.bricks[a.pc].kind});
            std::uint64_t age = a.age;
            Flow flow = exec(a, *inst, script);
            if (flow != Flow::Next || a.age != age || current != scene_index) return;
        }
    }

    void schedule() {
        for (;;) {
            std::size_t scene_index = current;
            auto& sc = scene();
            std::vector<Activation*> order;
            for (auto& a : sc.activations) {
                if (!a->ran && a->mode != Activation::Mode::Done) order.push_back(a.get());
            }
            std::sort(order.begin(), order.end(), [&](const Activation* l, const Activation* r) { return order_key(*l) < order_key(*r); });
            bool progress = false;
            for (Activation* a : order) {
                if (current != scene_index) break;
                if (a->ran || !runnable(*a)) continue;
                a->ran = true;
                progress = true;
                run_turn(*a);
            }
            if (!progress && current == scene_index) return;
        }
    }

    void deliver_answers(const std::vector<std::string>& answers) {
        std::vector<Activation*> asking;
        for (auto& a : scene().activations) {
            if (a->mode == Activation::Mode::Asking) asking.push_back(a.get());
        }
        std::sort(asking.begin(), asking.end(), [](const Activation* l, const Activation* r) { return l->ask_order < r->ask_order; });
        std::size_t next = 0;
        for (const auto& answer : answers) {
            if (next == asking.size()) {
                diagnostic(0, "answer without a question");
                continue;
            }
            Activation& a = *asking[next++];
            if (Instance* inst = find_instance(a.instance)) {
                if (Value* slot = variable_slot(*inst, a.ask_variable)) *slot = Value(answer);
            }
            a.mode = Activation::Mode::Ready;
        }
    }

    void hit_test(const device::Tap& tap) {
        auto& sc = scene();
        std::vector<std::uint64_t> stack(sc.z_order.rbegin(), sc.z_order.rend());
        for (const auto& [id, inst] : sc.instances) {
            if (inst.object == 0) stack.push_back(id);
        }
        for (auto id : stack) {
            const Instance& inst = sc.instances.at(id);
            if (!inst.visible || inst.transparency >= 100.0) continue;
            if (!point_in_convex(outline(inst), {tap.x, tap.y})) continue;
            if (has_hat(inst, HatKind::WhenTapped)) sc.pending.push_back({id, HatKind::WhenTapped});
            return;
        }
    }

    void step_physics() {
        auto& sc = scene();
        auto& w = sc.world;
        for (auto& [id, inst] : sc.instances) {
            auto& body = w.bodies[id];
            body.position = {inst.x, inst.y};
            body.direction = inst.direction;
            body.scale = inst.size / 100.0;
            body.shape = shape_of(inst);
        }
        const auto& contacts = w.step(kFrameSeconds);
        for (auto& [id, inst] : sc.instances) {
            const auto& body = w.bodies.at(id);
            if (body.type == physics::MotionType::Dynamic) move_to(inst, body.position.x, body.position.y);
        }
        std::set<std::uint64_t> touched;
        for (const auto& c : contacts) {
            touched.insert(c.a);
            touched.insert(c.b);
        }
        for (auto id : touched) {
            if (has_hat(sc.instances.at(id), HatKind::WhenPhysicalCollision)) sc.pending.push_back({id, HatKind::WhenPhysicalCollision});
        }
    }

    void run_frame(const device::FrameInputs& in) {
        events.clear();
        pen.clear();
        sensors = in.sensors;
        for (auto& sc : scenes)
            for (auto& a : sc.activations) a->ran = false;

        auto pending = std::move(scene().pending);
        scene().pending.clear();
        for (const auto& t : pending) trigger(t.instance, t.hat);
        deliver_answers(in.answers);
        for (const auto& tap : in.taps) hit_test(tap);

        schedule();
        step_physics();

        for (auto& sc : scenes) std::erase_if(sc.activations, [](const auto& a) { return a->mode == Activation::Mode::Done; });
        ++frame;
    }

    // --- output -----------------------------------------------------------

    std::uint64_t hash() const {
        Fnv1a64 h;
        h.i64(frame);
        h.u64(current);
        h.u64(random.seed());
        h.u64(random.draws());
        h.u64(next_instance);
        h.u64(next_age);
        h.u64(next_ask);
        hash_variables(h, globals, global_lists);
        h.u64(watched.size());
        for (const auto& [owner, name] : watched) {
            h.u64(owner);
            h.str(name);
        }
        h.u64(pen_hash);
        h.u64(pen_count);
        for (const auto& sc : scenes) {
            h.boolean(sc.started);
            h.u64(sc.instances.size());
            for (const auto& [id, i] : sc.instances) {
                h.u64(id);
                h.u64(i.object);
                h.boolean(i.clone);
                for (double v : {i.x, i.y, i.direction, i.size, i.transparency, i.brightness, i.volume, i.pen_size}) h.f64(v);
                h.i64(i.look);
                h.boolean(i.visible);
                h.str(i.bubble);
                h.boolean(i.thinking);
                h.boolean(i.pen_down);
                h.byte(i.pen_r);
                h.byte(i.pen_g);
                h.byte(i.pen_b);
                hash_variables(h, i.locals, i.local_lists);
            }
            h.u64(sc.z_order.size());
            for (auto id : sc.z_order) h.u64(id);
            h.u64(sc.activations.size());
            for (const auto& a : sc.activations) {
                h.u64(a->instance);
                h.u64(a->script);
                h.u64(a->age);
                h.u64(a->pc);
                h.u64(a->loops.size());
                for (const auto& [open, left] : a->loops) {
                    h.u64(open);
                    h.i64(left);
                }
                h.byte(static_cast<std::uint8_t>(a->mode));
                h.i64(a->resume_frame);
                for (double v : {a->glide_from.x, a->glide_from.y, a->glide_to.x, a->glide_to.y}) h.f64(v);
                h.i64(a->glide_total);
                h.i64(a->glide_done);
                h.u64(a->awaited.size());
                for (const auto& w : a->awaited) {
                    h.u64(w.instance);
                    h.u64(w.script);
                    h.u64(w.age);
                }
                h.str(a->ask_variable);
                h.u64(a->ask_order);
            }
            sc.world.hash_into(h);
            h.u64(sc.pending.size());
            for (const auto& t : sc.pending) {
                h.u64(t.instance);
                h.byte(static_cast<std::uint8_t>(t.hat));
            }
        }
        return h.value();
    }

    FrameResult result(bool executed) const {
        FrameResult r;
        r.frame = executed ? frame - 1 : frame;
        r.executed = executed;
        r.paused = paused;
        r.stopped = stopped;
        r.axes_visible = axes;
        if (scenes.empty()) {
            r.hash = hash();
            return r;
        }
        const auto& sc = scene();
        r.scene = project.scenes[current].name;
        std::vector<std::uint64_t> order;
        for (const auto& [id, inst] : sc.instances) {
            if (inst.object == 0) order.push_back(id);
        }
        order.insert(order.end(), sc.z_order.begin(), sc.z_order.end());
        for (auto id : order) {
            const Instance& inst = sc.instances.at(id);
            DisplayItem item;
            item.instance = id;
            item.object = object_of(inst).name;
            if (const auto* look = look_of(inst)) {
                item.look = look->name;
                item.asset = look->file;
            }
            item.x = inst.x;
            item.y = inst.y;
            item.direction = inst.direction;
            item.scale = inst.size / 100.0;
            item.transparency = inst.transparency;
            item.brightness = inst.brightness;
            item.visible = inst.visible;
            item.layer = layer_of(sc, inst);
            item.bubble = inst.bubble;
            item.thinking = inst.thinking;
            r.display.push_back(std::move(item));
        }
        if (executed) {
            r.events = events;
            r.pen = pen;
        }
        for (const auto& [owner, name] : watched) {
            const Value* v = nullptr;
            if (owner == 0) {
                auto it = globals.find(name);
                if (it != globals.end()) v = &it->second;
            } else if (auto it = sc.instances.find(owner); it != sc.instances.end()) {
                auto var = it->second.locals.find(name);
                if (var != it->second.locals.end()) v = &var->second;
            }
            if (v) r.watched.push_back({owner, name, v->as_text()});
        }
        r.hash = hash();
        return r;
    }
};

Runtime::Runtime(model::Project project, RuntimeOptions options) : s_(std::make_unique<State>(std::move(project), std::move(options))) {}
Runtime::~Runtime() = default;
Runtime::Runtime(Runtime&&) noexcept = default;
Runtime& Runtime::operator=(Runtime&&) noexcept = default;

FrameResult Runtime::step_frame(const device::FrameInputs& inputs) {
    for (auto c : inputs.controls) {
        switch (c) {
            case device::Control::Pause: s_->paused = true; break;
            case device::Control::Resume: s_->paused = false; break;
            case device::Control::Restart: s_->reset(); break;
            case device::Control::ToggleAxes: s_->axes = !s_->axes; break;
            case device::Control::Stop: s_->stopped = true; break;
        }
    }
    if (s_->paused || s_->stopped || s_->scenes.empty()) return s_->result(false);
    s_->run_frame(inputs);
    return s_->result(true);
}

void Runtime::restart() { s_->reset(); }
std::uint64_t Runtime::hash() const { return s_->hash(); }
std::int64_t Runtime::frame() const { return s_->frame; }
bool Runtime::paused() const { return s_->paused; }
bool Runtime::stopped() const { return s_->stopped; }
const model::Project& Runtime::project() const { return s_->project; }
std::string Runtime::current_scene() const { return s_->scenes.empty() ? std::string() : s_->project.scenes[s_->current].name; }

std::vector<const Instance*> Runtime::instances_of(const std::string& object) const {
    std::vector<const Instance*> out;
    if (s_->scenes.empty()) return out;
    for (const auto& [id, inst] : s_->scene().instances) {
        if (s_->object_of(inst).name == object) out.push_back(&inst);
    }
    return out;
}

const Instance* Runtime::instance(std::uint64_t id) const {
    for (const auto& sc : s_->scenes) {
        if (auto it = sc.instances.find(id); it != sc.instances.end()) return &it->second;
    }
    return nullptr;
}

std::size_t Runtime::clone_count() const { return s_->live_clones(); }

std::size_t Runtime::activation_count() const {
    std::size_t n = 0;
    for (const auto& sc : s_->scenes) n += sc.activations.size();
    return n;
}

const formula::Value* Runtime::variable(const std::string& name, const Instance* who) const {
    if (who) {
        if (auto it = who->locals.find(name); it != who->locals.end()) return &it->second;
    }
    auto it = s_->globals.find(name);
    return it == s_->globals.end() ? nullptr : &it->second;
}

const std::vector<formula::Value>* Runtime::list(const std::string& name, const Instance* who) const {
    if (who) {
        if (auto it = who->local_lists.find(name); it != who->local_lists.end()) return &it->second;
    }
    auto it = s_->global_lists.find(name);
    return it == s_->global_lists.end() ? nullptr : &it->second;
}

const physics::PhysicsWorld& Runtime::physics() const { return s_->scene().world; }
const physics::HullCache& Runtime::hulls() const { return s_->hulls; }

}  // namespace brickvm::interp
