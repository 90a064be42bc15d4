// Writes the bundled fixtures to disk: projects, timelines and Scratch sources.

#include <cstdio>
#include <filesystem>

#include "brickvm/model/archive.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace brickvm;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: make_fixtures <output directory>\n");
        return 2;
    }
    fs::path root = argv[1];
    for (const char* sub : {"projects", "timelines", "scratch"}) fs::create_directories(root / sub);
    for (const auto& bundle : fixtures::determinism_suite()) {
        write_file(root / "projects" / (bundle.name + ".catrobat"), model::save_project(bundle.project));
        if (!bundle.timeline.empty()) write_file(root / "timelines" / (bundle.name + ".timeline"), to_bytes(bundle.timeline));
    }
    write_file(root / "timelines" / "flat.timeline", to_bytes(fixtures::flat_timeline()));
    for (const auto& scratch : fixtures::scratch_fixtures()) write_file(root / "scratch" / (scratch.name + ".sb3"), scratch.sb3);
    std::printf("fixtures written to %s\n", root.string().c_str());
    return 0;
}
