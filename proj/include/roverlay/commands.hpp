#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>

#include "roverlay/bench.hpp"
#include "roverlay/config.hpp"

namespace roverlay {

struct BakeOptions {
    std::filesystem::path geojson;
    std::array<double, 6> transform{1, 0, 0, 1, 0, 0};
    int resolution = 1024;
    double half_height = 50.0;
    std::filesystem::path out_dir;
};

struct RenderOptions {
    std::filesystem::path config;
    Technique technique = Technique::pps;
    std::filesystem::path output;
    std::optional<std::filesystem::path> mask_output;  // 16-bit grayscale PNG
    int threads = 1;
    bool no_clamp = false;
};

struct BenchCmdOptions {
    std::optional<std::filesystem::path> config;
    BenchOptions bench;
    std::filesystem::path csv_out;
    std::optional<std::filesystem::path> slopes_csv;
};

struct CompareOptions {
    std::filesystem::path config;
    Technique technique_a = Technique::csg;
    Technique technique_b = Technique::pps;
    int threads = 1;
    std::optional<std::filesystem::path> diff_image;
};

// Offline pre-processing: extruded prism OBJ, 16-bit region-id PNG with a
// JSON sidecar, and the styled RGBA PNG.
int cmd_bake(const BakeOptions& opt, std::ostream& out);

// Full pipeline for one technique; writes PPM or PNG by extension and prints
// a render report.
int cmd_render(const RenderOptions& opt, std::ostream& out, std::ostream& err);

// Benchmark CSV plus environment sidecar and slope table.
int cmd_bench(const BenchCmdOptions& opt, std::ostream& out);

// Mask agreement metrics between two techniques on the same scene.
int cmd_compare(const CompareOptions& opt, std::ostream& out);

}  // namespace roverlay
