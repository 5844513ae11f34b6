#include "roverlay/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "roverlay/errors.hpp"
#include "roverlay/image.hpp"
#include "roverlay/polygon.hpp"

namespace roverlay {

using nlohmann::json;

namespace {

struct Collector {
    std::vector<std::string> errors;

    void add(const std::string& msg) { errors.push_back(msg); }

    void finish() const {
        if (errors.empty()) return;
        std::ostringstream os;
        os << "invalid scene config (" << errors.size() << " problem(s)):";
        for (const std::string& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
};

double num_or(const json& j, const char* key, double fallback, Collector* err,
              const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        err->add(where + "." + key + " must be a number");
        return fallback;
    }
    return j[key].get<double>();
}

bool bool_or(const json& j, const char* key, bool fallback, Collector* err,
             const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) {
        err->add(where + "." + key + " must be a boolean");
        return fallback;
    }
    return j[key].get<bool>();
}

bool read_vec3(const json& j, const char* key, Vec3* out, Collector* err,
               const std::string& where, bool required) {
    if (!j.contains(key)) {
        if (required) err->add(where + "." + key + " is required");
        return false;
    }
    const json& a = j[key];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
        !a[2].is_number()) {
        err->add(where + "." + key + " must be an array of 3 numbers");
        return false;
    }
    *out = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    return true;
}

bool read_color(const json& j, const char* key, Color3f* out, Collector* err,
                const std::string& where) {
    Vec3 v;
    if (!read_vec3(j, key, &v, err, where, false)) return false;
    *out = {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
    return true;
}

OverlayStyle read_style(const json& j, Collector* err, const std::string& where) {
    OverlayStyle style;
    Pattern pattern = Pattern::fill;
    if (j.contains("pattern")) {
        const std::string p = j["pattern"].is_string() ? j["pattern"].get<std::string>() : "";
        if (p == "fill")
            pattern = Pattern::fill;
        else if (p == "stripes")
            pattern = Pattern::stripes;
        else if (p == "dots")
            pattern = Pattern::dots;
        else
            err->add(where + ".pattern must be fill|stripes|dots");
    }
    Density density = Density::low;
    if (j.contains("density")) {
        const std::string d = j["density"].is_string() ? j["density"].get<std::string>() : "";
        if (d == "low")
            density = Density::low;
        else if (d == "high")
            density = Density::high;
        else
            err->add(where + ".density must be low|high");
    }
    style = OverlayStyle::make(pattern, density);
    style.outline = bool_or(j, "outline", false, err, where);
    style.outline_width_px = num_or(j, "outline_width", 12.0, err, where);
    read_color(j, "color", &style.color, err, where);
    style.opacity = num_or(j, "opacity", 0.45, err, where);
    if (style.opacity < 0.0 || style.opacity > 1.0)
        err->add(where + ".opacity must be within [0,1]");
    return style;
}

}  // namespace

SceneConfig load_scene_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scene config: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene config is not valid JSON: ") + e.what());
    }

    Collector err;
    SceneConfig cfg;
    cfg.base_dir = path.parent_path();

    if (!doc.is_object()) {
        err.add("top level must be a JSON object");
        err.finish();
    }
    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != 1)
        err.add("schema must be the integer 1");

    if (doc.contains("resolution")) {
        const json& r = doc["resolution"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
            !r[1].is_number_integer())
            err.add("resolution must be [width, height]");
        else {
            cfg.width = r[0].get<int>();
            cfg.height = r[1].get<int>();
        }
    }
    if (cfg.width < 16 || cfg.height < 16) err.add("resolution must be at least 16x16");

    if (doc.contains("terrain") && doc["terrain"].is_object()) {
        const json& t = doc["terrain"];
        if (t.contains("png")) {
            if (!t["png"].is_string())
                err.add("terrain.png must be a path string");
            else
                cfg.terrain.png = t["png"].get<std::string>();
        }
        cfg.terrain.height_scale = num_or(t, "height_scale", 30.0, &err, "terrain");
        cfg.terrain.height_offset = num_or(t, "height_offset", 0.0, &err, "terrain");
        cfg.terrain.seed = static_cast<std::uint64_t>(num_or(t, "seed", 1.0, &err, "terrain"));
        cfg.terrain.nx = static_cast<int>(num_or(t, "nx", 129.0, &err, "terrain"));
        cfg.terrain.nz = static_cast<int>(num_or(t, "nz", 129.0, &err, "terrain"));
        cfg.terrain.amplitude = num_or(t, "amplitude", 5.0, &err, "terrain");
        cfg.terrain.cell_size = num_or(t, "cell_size", 1.0, &err, "terrain");
        read_color(t, "albedo", &cfg.terrain.albedo, &err, "terrain");
        if (cfg.terrain.cell_size <= 0.0) err.add("terrain.cell_size must be positive");
        if (cfg.terrain.png.empty() && (cfg.terrain.nx < 2 || cfg.terrain.nz < 2))
            err.add("terrain grid must be at least 2x2");
    } else if (!doc.contains("terrain")) {
        err.add("terrain section is required");
    } else {
        err.add("terrain must be an object");
    }
    if (!cfg.terrain.png.empty()) {
        const auto png_path = cfg.base_dir / cfg.terrain.png;
        if (!std::filesystem::exists(png_path))
            err.add("terrain.png does not exist: " + png_path.string());
    }

    if (doc.contains("objects")) {
        if (!doc["objects"].is_array())
            err.add("objects must be an array");
        else {
            int index = 0;
            for (const json& o : doc["objects"]) {
                const std::string where = "objects[" + std::to_string(index++) + "]";
                ObjectConfig obj;
                if (!o.is_object() || !o.contains("type") || !o["type"].is_string()) {
                    err.add(where + " must be an object with a type");
                    continue;
                }
                obj.type = o["type"].get<std::string>();
                read_color(o, "albedo", &obj.albedo, &err, where);
                if (obj.type == "cone") {
                    read_vec3(o, "position", &obj.position, &err, where, true);
                    obj.radius = num_or(o, "radius", 1.0, &err, where);
                    obj.height = num_or(o, "height", 2.0, &err, where);
                    obj.segments = static_cast<int>(num_or(o, "segments", 16.0, &err, where));
                    if (obj.radius <= 0.0 || obj.height <= 0.0 || obj.segments < 3)
                        err.add(where + " cone needs positive radius/height, >=3 segments");
                } else if (obj.type == "box") {
                    read_vec3(o, "min", &obj.box_min, &err, where, true);
                    read_vec3(o, "max", &obj.box_max, &err, where, true);
                } else {
                    err.add(where + ".type must be cone|box");
                }
                cfg.objects.push_back(obj);
            }
        }
    }

    if (doc.contains("camera") && doc["camera"].is_object()) {
        const json& c = doc["camera"];
        read_vec3(c, "position", &cfg.camera.position, &err, "camera", true);
        Vec3 look_at;
        if (read_vec3(c, "look_at", &look_at, &err, "camera", false))
            cfg.camera.forward = look_at - cfg.camera.position;
        else
            read_vec3(c, "forward", &cfg.camera.forward, &err, "camera", true);
        read_vec3(c, "up", &cfg.camera.up, &err, "camera", false);
        cfg.camera.vfov_deg = num_or(c, "vfov_deg", 50.0, &err, "camera");
        cfg.camera.near_clip = num_or(c, "near", 0.1, &err, "camera");
        cfg.camera.far_clip = num_or(c, "far", 1e5, &err, "camera");
        if (!(cfg.camera.vfov_deg > 0.0 && cfg.camera.vfov_deg < 180.0))
            err.add("camera.vfov_deg must be in (0, 180)");
        if (!(cfg.camera.near_clip > 0.0 && cfg.camera.near_clip < cfg.camera.far_clip))
            err.add("camera clip planes need 0 < near < far");
        if (length(cfg.camera.forward) < 1e-12) err.add("camera.forward must be non-zero");
    } else {
        err.add("camera section is required");
    }
    cfg.camera.aspect = cfg.height > 0 ? static_cast<double>(cfg.width) / cfg.height : 1.0;

    if (doc.contains("sun") && doc["sun"].is_object()) {
        const json& s = doc["sun"];
        read_vec3(s, "direction", &cfg.sun.direction, &err, "sun", false);
        cfg.sun.intensity = num_or(s, "intensity", 1.0, &err, "sun");
        cfg.sun.ambient = num_or(s, "ambient", 0.25, &err, "sun");
        read_color(s, "sky_color", &cfg.sun.sky_color, &err, "sun");
        if (length(cfg.sun.direction) < 1e-12) err.add("sun.direction must be non-zero");
    }

    if (doc.contains("transform")) {
        const json& t = doc["transform"];
        if (!t.is_array() || t.size() != 6)
            err.add("transform must be [a, b, c, d, tx, ty]");
        else
            for (int i = 0; i < 6; ++i) {
                if (!t[i].is_number())
                    err.add("transform entries must be numbers");
                else
                    cfg.transform[static_cast<std::size_t>(i)] = t[i].get<double>();
            }
    }
    {
        const WorldCrsTransform t{cfg.transform[0], cfg.transform[1], cfg.transform[2],
                                  cfg.transform[3], cfg.transform[4], cfg.transform[5]};
        if (!t.invertible()) err.add("transform is not invertible (|det| <= 1e-12)");
    }

    if (doc.contains("overlays")) {
        if (!doc["overlays"].is_array())
            err.add("overlays must be an array");
        else {
            int index = 0;
            bool policy_set = false;
            for (const json& o : doc["overlays"]) {
                const std::string where = "overlays[" + std::to_string(index++) + "]";
                OverlayFileConfig entry;
                if (!o.is_object() || !o.contains("geojson") || !o["geojson"].is_string()) {
                    err.add(where + " must be an object with a geojson path");
                    continue;
                }
                entry.geojson = cfg.base_dir / o["geojson"].get<std::string>();
                if (!std::filesystem::exists(entry.geojson))
                    err.add(where + ".geojson does not exist: " + entry.geojson.string());
                if (o.contains("styles")) {
                    if (!o["styles"].is_object())
                        err.add(where + ".styles must be an object keyed by region id");
                    else {
                        for (const auto& [key, value] : o["styles"].items()) {
                            if (key == "default") {
                                entry.default_style =
                                    read_style(value, &err, where + ".styles.default");
                                entry.has_default_style = true;
                                continue;
                            }
                            char* end = nullptr;
                            const unsigned long id = std::strtoul(key.c_str(), &end, 10);
                            if (end == key.c_str() || *end != '\0' || id == 0) {
                                err.add(where + ".styles key must be a positive id or default");
                                continue;
                            }
                            entry.styles[static_cast<std::uint32_t>(id)] =
                                read_style(value, &err, where + ".styles." + key);
                        }
                    }
                }
                if (o.contains("policy")) {
                    const json& p = o["policy"];
                    OpacityPolicy policy;
                    policy.min = num_or(p, "min", 0.20, &err, where + ".policy");
                    policy.max = num_or(p, "max", 0.70, &err, where + ".policy");
                    policy.default_value = num_or(p, "default", 0.45, &err, where + ".policy");
                    if (!(policy.min >= 0.0 && policy.min < policy.max && policy.max <= 1.0))
                        err.add(where + ".policy needs 0 <= min < max <= 1");
                    else if (!(policy.default_value >= policy.min &&
                               policy.default_value <= policy.max))
                        err.add(where + ".policy default must lie within [min, max]");
                    if (policy_set)
                        err.add("only one overlay entry may define the opacity policy");
                    cfg.policy = policy;
                    policy_set = true;
                }
                cfg.overlays.push_back(std::move(entry));
            }
        }
    }

    if (doc.contains("roi_resolution")) {
        const json& r = doc["roi_resolution"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
            !r[1].is_number_integer())
            err.add("roi_resolution must be [width, height]");
        else {
            cfg.roi_width = r[0].get<int>();
            cfg.roi_height = r[1].get<int>();
        }
        if (cfg.roi_width < 1 || cfg.roi_height < 1) err.add("roi_resolution must be positive");
    }
    if (doc.contains("crs_window")) {
        const json& w = doc["crs_window"];
        if (!w.is_array() || w.size() != 4)
            err.add("crs_window must be [min_u, min_v, max_u, max_v]");
        else {
            cfg.crs_window.min = {w[0].get<double>(), w[1].get<double>()};
            cfg.crs_window.max = {w[2].get<double>(), w[3].get<double>()};
            cfg.has_crs_window = true;
            if (!(cfg.crs_window.width() > 0.0 && cfg.crs_window.height() > 0.0))
                err.add("crs_window is degenerate");
        }
    }
    cfg.half_height = num_or(doc, "half_height", 0.0, &err, "scene");
    cfg.clamp_opacity = bool_or(doc, "clamp_opacity", true, &err, "scene");
    cfg.decal_affects_objects = bool_or(doc, "decal_objects", false, &err, "scene");

    err.finish();
    return cfg;
}

BuiltScene build_scene(const SceneConfig& cfg) {
    BuiltScene scene;
    scene.width = cfg.width;
    scene.height = cfg.height;
    scene.terrain_albedo = cfg.terrain.albedo;
    scene.camera = cfg.camera;
    scene.sun = cfg.sun;
    scene.policy = cfg.policy;
    scene.clamp_opacity = cfg.clamp_opacity;
    scene.transform = WorldCrsTransform::from_coeffs(cfg.transform);
    scene.decal_filter.objects = cfg.decal_affects_objects;

    if (!cfg.terrain.png.empty()) {
        const Gray16Image img = read_png_gray16(cfg.base_dir / cfg.terrain.png);
        scene.terrain = heightfield_from_gray16(img, cfg.terrain.cell_size,
                                                cfg.terrain.height_scale,
                                                cfg.terrain.height_offset);
    } else {
        scene.terrain = procedural_heightfield(cfg.terrain.seed, cfg.terrain.nx, cfg.terrain.nz,
                                               cfg.terrain.cell_size, cfg.terrain.amplitude);
    }

    for (const ObjectConfig& obj : cfg.objects) {
        if (obj.type == "cone")
            scene.objects.push_back(
                make_cone(obj.position, obj.radius, obj.height, obj.segments, obj.albedo));
        else
            scene.objects.push_back(make_box(obj.box_min, obj.box_max, obj.albedo));
    }

    // Merge all overlay files; region ids must stay globally unique.
    std::set<std::uint32_t> seen_ids;
    for (const OverlayFileConfig& entry : cfg.overlays) {
        std::ifstream in(entry.geojson);
        if (!in) throw IoError("cannot open " + entry.geojson.string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        const RoiSet parsed = parse_geojson(buffer.str());
        for (const RoiPolygon& poly : parsed.regions) {
            if (!seen_ids.insert(poly.region_id).second)
                throw ConfigError("region id " + std::to_string(poly.region_id) +
                                  " appears in more than one overlay file");
            scene.rois.regions.push_back(poly);
            const auto it = entry.styles.find(poly.region_id);
            if (it != entry.styles.end())
                scene.styles[poly.region_id] = it->second;
            else if (entry.has_default_style)
                scene.styles[poly.region_id] = entry.default_style;
            else
                scene.styles[poly.region_id] = OverlayStyle::make(Pattern::fill, Density::low);
        }
        scene.rois.extra_coord_warnings += parsed.extra_coord_warnings;
    }
    for (const RoiPolygon& poly : scene.rois.regions) {
        for (const Vec2& p : poly.exterior) scene.rois.crs_bounds.expand(p);
        for (const auto& hole : poly.holes)
            for (const Vec2& p : hole) scene.rois.crs_bounds.expand(p);
    }

    scene.half_height = cfg.half_height > 0.0
                            ? cfg.half_height
                            : 10.0 * std::max(scene.terrain.max_abs_height(), 1e-6);
    for (const RoiPolygon& poly : scene.rois.regions)
        scene.shape_meshes.push_back(extrude_polygon(poly, scene.transform, scene.half_height));

    if (!scene.rois.regions.empty()) {
        CrsRect window;
        if (cfg.has_crs_window) {
            window = cfg.crs_window;
        } else {
            // Pad the tight bounds so boundary texels stay interior.
            const double pad_u = 0.02 * scene.rois.crs_bounds.width();
            const double pad_v = 0.02 * scene.rois.crs_bounds.height();
            window.expand(scene.rois.crs_bounds.min - Vec2{pad_u, pad_v});
            window.expand(scene.rois.crs_bounds.max + Vec2{pad_u, pad_v});
        }
        scene.roi_texture = rasterize_roi(scene.rois, window, cfg.roi_width, cfg.roi_height);
        scene.decal_texture =
            make_decal_texture(scene.roi_texture, bake_style_texture(scene.roi_texture, scene.styles));

        // Auto projector: straight-down orthographic box over the window's
        // world-space footprint.
        CrsRect world_rect;
        world_rect.expand(scene.transform.world_from_crs(window.min));
        world_rect.expand(scene.transform.world_from_crs(window.max));
        world_rect.expand(scene.transform.world_from_crs({window.min.x, window.max.y}));
        world_rect.expand(scene.transform.world_from_crs({window.max.x, window.min.y}));
        scene.decal_projector =
            Projector::top_down_ortho(world_rect, 2.0 * scene.half_height, 4.0 * scene.half_height);
    }
    return scene;
}

OverlayMask compute_mask(const BuiltScene& scene, const GBuffer& g, Technique technique,
                         int threads, PpsStats* stats) {
    if (scene.rois.regions.empty()) {
        OverlayMask mask;
        mask.width = g.width;
        mask.height = g.height;
        mask.ids.assign(static_cast<std::size_t>(g.width) * g.height, 0);
        return mask;
    }
    switch (technique) {
        case Technique::csg:
            return csg_mask(g, scene.shape_meshes, scene.camera, threads);
        case Technique::decal:
            return apply_decal(g, scene.decal_projector, scene.decal_texture,
                               scene.decal_filter, threads);
        case Technique::pps:
            return pps_lookup(g, scene.transform, scene.roi_texture, stats, threads);
    }
    throw Error("unknown technique");
}

}  // namespace roverlay
