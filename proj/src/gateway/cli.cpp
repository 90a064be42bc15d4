#include "brickvm/gateway/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "brickvm/gateway/server.hpp"
#include "brickvm/gateway/session.hpp"
#include "brickvm/model/archive.hpp"
#include "brickvm/model/statistics.hpp"
#include "brickvm/support/hash.hpp"
#include "brickvm/tools/merge.hpp"
#include "brickvm/tools/scratch.hpp"

namespace brickvm::gateway {

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Bytes read_input(const std::string& path, const char* what) {
    try {
        return read_file(path);
    } catch (const std::exception&) {
        throw Failure(std::string("cannot read ") + what + " " + path);
    }
}

model::Project load(const std::string& path) {
    Bytes data = read_input(path, "project");
    try {
        std::vector<std::string> notes;
        model::Project p = model::load_project(data, &notes);
        for (const auto& n : notes) spdlog::info("{}: {}", path, n);
        return p;
    } catch (const model::ProjectError& e) {
        throw Failure(path + ": " + model::kind_name(e.kind()) + " at " + e.path() + ": " + e.what());
    } catch (const std::exception& e) {
        throw Failure(path + ": " + e.what());
    }
}

device::SensorTimeline load_timeline(const std::string& path) {
    if (path.empty()) return {};
    try {
        return device::parse_timeline(to_string(read_input(path, "timeline")));
    } catch (const device::TimelineError& e) {
        throw Failure(path + ": " + e.what());
    }
}

void write_output(const std::string& path, ByteView data) {
    try {
        write_file(path, data);
    } catch (const std::exception& e) {
        throw Failure(e.what());
    }
}

struct RunArgs {
    std::string project, timeline, out, inputs;
    long frames = 600;
    std::uint64_t seed = 0;
};

int run(const RunArgs& a, std::ostream& out) {
    model::Project project = load(a.project);
    std::vector<StepRecord> records;
    if (!a.inputs.empty()) {
        if (!a.timeline.empty()) throw Failure("--inputs and --timeline are exclusive");
        try {
            records = parse_input_log(to_string(read_input(a.inputs, "input log")));
        } catch (const Failure&) {
            throw;
        } catch (const std::exception& e) {
            throw Failure(a.inputs + ": " + e.what());
        }
    }
    device::SensorTimeline timeline = load_timeline(a.timeline);
    long frames = a.frames;
    if (!a.inputs.empty() && frames > static_cast<long>(records.size())) frames = static_cast<long>(records.size());

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary | std::ios::trunc);
        if (!file) throw Failure("cannot write " + a.out);
    }
    std::ostream& log = a.out.empty() ? out : file;

    interp::RuntimeOptions options;
    options.seed = a.seed;
    interp::Runtime rt(std::move(project), options);
    const auto& header = rt.project().header;
    for (long f = 0; f < frames; ++f) {
        device::FrameInputs inputs;
        if (records.empty()) inputs = device::merge_live_input(device::snapshot_at(timeline, rt.frame()), {}, header.stage_width, header.stage_height);
        else inputs = records[static_cast<std::size_t>(f)].inputs;
        auto result = rt.step_frame(inputs);
        log << interp::frame_log_line(result) << '\n';
        if (!records.empty() && result.hash != records[static_cast<std::size_t>(f)].hash)
            spdlog::warn("replay diverges at seq {}: recorded {}, got {}", records[f].seq, hex64(records[f].hash), hex64(result.hash));
    }
    if (file.is_open()) {
        file.close();
        if (!file) throw Failure("short write to " + a.out);
    }
    out << "frames=" << frames << " hash=" << hex64(rt.hash()) << '\n';
    return 0;
}

int stats(const std::string& path, bool code, std::ostream& out) {
    model::Project p = load(path);
    out << model::format_statistics(p, model::compute_statistics(p));
    if (code) out << '\n' << model::render_code_view(p);
    return 0;
}

int merge(const std::string& a, const std::string& b, const std::string& dest, std::ostream& out) {
    model::Project pa = load(a), pb = load(b);
    tools::MergeResult m;
    try {
        m = tools::merge(pa, pb);
    } catch (const tools::MergeConflict& e) {
        throw Failure(std::string("merge conflict: ") + e.what());
    }
    write_output(dest, model::save_project(m.project));
    out << tools::format_merge_report(m);
    return 0;
}

int convert(const std::string& src, const std::string& dest, std::ostream& out) {
    Bytes data = read_input(src, "Scratch project");
    std::string name = std::filesystem::path(src).stem().string();
    tools::Conversion c;
    try {
        c = tools::convert_scratch(data, name);
    } catch (const std::exception& e) {
        throw Failure(src + ": " + e.what());
    }
    write_output(dest, model::save_project(c.project));
    out << tools::format_conversion_report(c.report);
    return 0;
}

struct ServeArgs {
    std::string project, timeline, out, bind = "127.0.0.1:8080";
    std::uint64_t seed = 0;
};

int serve(const ServeArgs& a) {
    SessionOptions options;
    options.seed = a.seed;
    options.timeline = load_timeline(a.timeline);
    options.record = a.out;
    ServerOptions server_options;
    auto colon = a.bind.rfind(':');
    if (colon == std::string::npos) throw Failure("--bind expects host:port");
    server_options.address = a.bind.substr(0, colon);
    try {
        int port = std::stoi(a.bind.substr(colon + 1));
        if (port < 0 || port > 65535) throw std::out_of_range("port");
        server_options.port = static_cast<unsigned short>(port);
    } catch (const std::exception&) {
        throw Failure("bad port in --bind " + a.bind);
    }
    server_options.handle_signals = true;
    Session session(load(a.project), std::move(options));
    try {
        Server server(session, server_options);
        server.run();
    } catch (const std::runtime_error& e) {
        throw Failure(e.what());
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Headless Catrobat runtime", "brickvm"};
    app.require_subcommand(1);
    std::string level = "warn";
    app.add_option("--log-level", level, "trace, debug, info, warn, error or off (BRICKVM_LOG overrides)");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a project headless and write its frame log");
    run_cmd->add_option("--project", run_args.project, "Project archive")->required();
    run_cmd->add_option("--timeline", run_args.timeline, "Sensor timeline");
    run_cmd->add_option("--frames", run_args.frames, "Frames to run")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--seed", run_args.seed, "Random seed");
    run_cmd->add_option("--out", run_args.out, "Frame log file (default: stdout)");
    run_cmd->add_option("--inputs", run_args.inputs, "Replay a recorded session input log");

    std::string stats_project;
    bool code_view = false;
    auto* stats_cmd = app.add_subcommand("stats", "Print code statistics");
    stats_cmd->add_option("--project,project", stats_project, "Project archive")->required();
    stats_cmd->add_flag("--code-view", code_view, "Also print the code view");

    std::string merge_a, merge_b, merge_out;
    auto* merge_cmd = app.add_subcommand("merge", "Merge two projects");
    merge_cmd->add_option("a", merge_a, "First project")->required();
    merge_cmd->add_option("b", merge_b, "Second project")->required();
    merge_cmd->add_option("--out", merge_out, "Merged archive")->required();

    std::string convert_src, convert_out;
    auto* convert_cmd = app.add_subcommand("convert", "Convert a Scratch 3 project");
    convert_cmd->add_option("src", convert_src, "Scratch .sb3 archive")->required();
    convert_cmd->add_option("--out", convert_out, "Converted archive")->required();

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Serve a project to one player over WebSocket");
    serve_cmd->add_option("--project", serve_args.project, "Project archive")->required();
    serve_cmd->add_option("--timeline", serve_args.timeline, "Sensor timeline");
    serve_cmd->add_option("--seed", serve_args.seed, "Random seed");
    serve_cmd->add_option("--bind", serve_args.bind, "host:port");
    serve_cmd->add_option("--out", serve_args.out, "Record the session input log here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("BRICKVM_LOG"); env && *env) level = env;
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("brickvm", sink);
    logger->set_pattern("%H:%M:%S.%e %l %v");
    auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && level != "off") {
        err << "brickvm: unknown log level '" << level << "'\n";
        return 2;
    }
    logger->set_level(parsed);
    auto previous = spdlog::default_logger();
    spdlog::set_default_logger(logger);
    struct Restore {
        std::shared_ptr<spdlog::logger> logger;
        ~Restore() { spdlog::set_default_logger(logger); }
    } restore{previous};

    try {
        if (*run_cmd) return run(run_args, out);
        if (*stats_cmd) return stats(stats_project, code_view, out);
        if (*merge_cmd) return merge(merge_a, merge_b, merge_out, out);
        if (*convert_cmd) return convert(convert_src, convert_out, out);
        if (*serve_cmd) return serve(serve_args);
    } catch (const Failure& e) {
        err << "brickvm: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "brickvm: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace brickvm::gateway
