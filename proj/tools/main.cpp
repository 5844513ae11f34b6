#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "roverlay/commands.hpp"
#include "roverlay/errors.hpp"

namespace {

int default_threads() {
    if (const char* env = std::getenv("OVERLAY_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

roverlay::Technique require_technique(const std::string& name) {
    const auto t = roverlay::parse_technique(name);
    if (!t) throw roverlay::ConfigError("unknown technique: " + name + " (use csg|decal|pps)");
    return *t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"terrain RoI overlay renderer and benchmark"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    int threads = default_threads();
    app.add_option("--threads", threads, "worker threads (env OVERLAY_THREADS)")
        ->check(CLI::PositiveNumber);

    roverlay::BakeOptions bake;
    std::vector<double> bake_transform{1, 0, 0, 1, 0, 0};
    auto* bake_cmd = app.add_subcommand(
        "bake", "pre-process GeoJSON into prism meshes and id/style textures");
    bake_cmd->add_option("geojson", bake.geojson, "input GeoJSON file")->required();
    bake_cmd->add_option("--out", bake.out_dir, "output directory")->required();
    bake_cmd
        ->add_option("--transform", bake_transform,
                     "world->CRS coefficients a b c d tx ty; (u,v) = (a*x+b*z+tx, c*x+d*z+ty)")
        ->expected(6);
    bake_cmd->add_option("--resolution", bake.resolution, "id texture size (NxN)")
        ->check(CLI::PositiveNumber);
    bake_cmd->add_option("--half-height", bake.half_height, "extrusion half height (world units)")
        ->check(CLI::PositiveNumber);

    roverlay::RenderOptions render;
    std::string render_technique = "pps";
    std::string render_mask_out;
    auto* render_cmd = app.add_subcommand("render", "render a scene config with one technique");
    render_cmd->add_option("config", render.config, "scene config JSON")->required();
    render_cmd->add_option("output", render.output, "output image (.ppm or .png)")->required();
    render_cmd->add_option("--technique", render_technique, "csg|decal|pps");
    render_cmd->add_option("--mask-out", render_mask_out,
                           "also write the overlay mask as 16-bit grayscale PNG");
    render_cmd->add_flag("--no-clamp", render.no_clamp, "disable opacity clamping");

    roverlay::BenchCmdOptions bench;
    std::string bench_config;
    std::vector<int> bench_counts;
    std::vector<std::string> bench_techniques;
    std::string bench_slopes_csv;
    auto* bench_cmd =
        app.add_subcommand("bench", "render-time benchmark across overlay counts");
    bench_cmd->add_option("--config", bench_config, "bench config JSON (optional)");
    bench_cmd->add_option("--csv", bench.csv_out, "output CSV path")->required();
    bench_cmd->add_option("--slopes-csv", bench_slopes_csv, "slope table CSV path");
    bench_cmd->add_option("--counts", bench_counts, "overlay counts");
    bench_cmd->add_option("--frames", bench.bench.frames_per_cell, "frames per cell (>= 10)");
    bench_cmd->add_option("--resolution", bench.bench.resolution, "frame size (NxN)");
    bench_cmd->add_option("--seed", bench.bench.seed, "scene seed");
    bench_cmd->add_option("--techniques", bench_techniques, "subset of csg decal pps");

    roverlay::CompareOptions compare;
    std::string compare_a = "csg", compare_b = "pps";
    std::string compare_diff;
    auto* compare_cmd =
        app.add_subcommand("compare", "mask agreement metrics between two techniques");
    compare_cmd->add_option("config", compare.config, "scene config JSON")->required();
    compare_cmd->add_option("a", compare_a, "first technique")->required();
    compare_cmd->add_option("b", compare_b, "second technique")->required();
    compare_cmd->add_option("--diff-image", compare_diff, "write a diff PNG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bake_cmd->parsed()) {
            for (int i = 0; i < 6; ++i)
                bake.transform[static_cast<std::size_t>(i)] = bake_transform[static_cast<std::size_t>(i)];
            return roverlay::cmd_bake(bake, std::cout);
        }
        if (render_cmd->parsed()) {
            render.technique = require_technique(render_technique);
            render.threads = threads;
            if (!render_mask_out.empty()) render.mask_output = render_mask_out;
            return roverlay::cmd_render(render, std::cout, std::cerr);
        }
        if (bench_cmd->parsed()) {
            if (!bench_config.empty()) bench.config = bench_config;
            if (!bench_slopes_csv.empty()) bench.slopes_csv = bench_slopes_csv;
            if (!bench_counts.empty()) bench.bench.counts = bench_counts;
            if (!bench_techniques.empty()) {
                bench.bench.techniques.clear();
                for (const std::string& name : bench_techniques)
                    bench.bench.techniques.push_back(require_technique(name));
            }
            bench.bench.threads = threads;
            return roverlay::cmd_bench(bench, std::cout);
        }
        if (compare_cmd->parsed()) {
            compare.technique_a = require_technique(compare_a);
            compare.technique_b = require_technique(compare_b);
            compare.threads = threads;
            if (!compare_diff.empty()) compare.diff_image = compare_diff;
            return roverlay::cmd_compare(compare, std::cout);
        }
    } catch (const roverlay::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const roverlay::InvalidTransform& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const roverlay::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
