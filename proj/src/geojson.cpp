#include "roverlay/geojson.hpp"

#include <json.hpp>

#include <set>
#include <string>

#include "roverlay/errors.hpp"

namespace roverlay {

using nlohmann::json;

double ring_signed_area(const std::vector<Vec2>& ring) {
    double twice = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

namespace {

Vec2 parse_position(const json& pos, int* extra_coord_warnings) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
        throw ParseError("coordinate position must be an array of at least two numbers");
    if (pos.size() > 2) ++*extra_coord_warnings;
    return {pos[0].get<double>(), pos[1].get<double>()};
}

// Reads one linear ring: verifies explicit closure, drops the closing vertex
// and consecutive duplicates, and requires at least 3 distinct vertices.
std::vector<Vec2> parse_ring(const json& arr, int* extra_coord_warnings) {
    if (!arr.is_array()) throw ParseError("ring must be an array of positions");
    std::vector<Vec2> ring;
    ring.reserve(arr.size());
    for (const json& pos : arr) ring.push_back(parse_position(pos, extra_coord_warnings));
    if (ring.size() < 4) throw DegenerateRing("ring has fewer than 4 positions");
    if (!(ring.front() == ring.back()))
        throw UnclosedRing("ring is not explicitly closed (first vertex != last vertex)");
    ring.pop_back();

    std::vector<Vec2> out;
    out.reserve(ring.size());
    for (const Vec2& p : ring) {
        if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();

    std::set<std::pair<double, double>> distinct;
    for (const Vec2& p : out) distinct.insert({p.x, p.y});
    if (distinct.size() < 3) throw DegenerateRing("ring has fewer than 3 distinct vertices");
    return out;
}

RoiPolygon parse_polygon_coordinates(const json& coords, int* extra_coord_warnings) {
    if (!coords.is_array() || coords.empty())
        throw ParseError("Polygon coordinates must be a non-empty array of rings");
    RoiPolygon poly;
    poly.exterior = parse_ring(coords[0], extra_coord_warnings);
    double area = ring_signed_area(poly.exterior);
    if (area == 0.0) throw DegenerateRing("exterior ring has zero area");
    if (area < 0.0) std::reverse(poly.exterior.begin(), poly.exterior.end());
    for (std::size_t i = 1; i < coords.size(); ++i) {
        std::vector<Vec2> hole = parse_ring(coords[i], extra_coord_warnings);
        double hole_area = ring_signed_area(hole);
        if (hole_area == 0.0) throw DegenerateRing("hole ring has zero area");
        if (hole_area > 0.0) std::reverse(hole.begin(), hole.end());
        poly.holes.push_back(std::move(hole));
    }
    return poly;
}

// Collects the polygons of one geometry object. An explicit id of 0 means
// "no override": ids are filled in later from document order.
void parse_geometry(const json& geom, std::uint32_t explicit_id, RoiSet* set) {
    if (!geom.is_object() || !geom.contains("type") || !geom["type"].is_string())
        throw ParseError("geometry object is missing a \"type\" string");
    const std::string type = geom["type"].get<std::string>();
    if (type == "Polygon") {
        if (!geom.contains("coordinates")) throw ParseError("Polygon has no coordinates");
        RoiPolygon poly = parse_polygon_coordinates(geom["coordinates"], &set->extra_coord_warnings);
        poly.region_id = explicit_id;
        set->regions.push_back(std::move(poly));
    } else if (type == "MultiPolygon") {
        if (!geom.contains("coordinates") || !geom["coordinates"].is_array())
            throw ParseError("MultiPolygon has no coordinate array");
        for (const json& poly_coords : geom["coordinates"]) {
            RoiPolygon poly = parse_polygon_coordinates(poly_coords, &set->extra_coord_warnings);
            poly.region_id = explicit_id;
            set->regions.push_back(std::move(poly));
        }
    } else {
        throw UnsupportedGeometry("unsupported geometry type: " + type);
    }
}

std::uint32_t parse_feature_id(const json& feature) {
    if (!feature.contains("properties")) return 0;
    const json& props = feature["properties"];
    if (!props.is_object() || !props.contains("id")) return 0;
    const json& id = props["id"];
    if (!id.is_number_integer() || id.get<std::int64_t>() <= 0 ||
        id.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max())
        throw ParseError("feature property \"id\" must be a positive integer");
    return static_cast<std::uint32_t>(id.get<std::int64_t>());
}

void parse_feature(const json& feature, RoiSet* set) {
    if (!feature.contains("geometry") || feature["geometry"].is_null())
        throw UnsupportedGeometry("feature has no geometry");
    parse_geometry(feature["geometry"], parse_feature_id(feature), set);
}

}  // namespace

RoiSet parse_geojson(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string())
        throw ParseError("document is missing a \"type\" string");

    RoiSet set;
    const std::string type = doc["type"].get<std::string>();
    if (type == "FeatureCollection") {
        if (!doc.contains("features") || !doc["features"].is_array())
            throw ParseError("FeatureCollection has no feature array");
        for (const json& feature : doc["features"]) parse_feature(feature, &set);
    } else if (type == "Feature") {
        parse_feature(doc, &set);
    } else {
        parse_geometry(doc, 0, &set);
    }

    std::set<std::uint32_t> used;
    for (std::size_t i = 0; i < set.regions.size(); ++i) {
        RoiPolygon& poly = set.regions[i];
        if (poly.region_id == 0) poly.region_id = static_cast<std::uint32_t>(i + 1);
        if (!used.insert(poly.region_id).second)
            throw ParseError("duplicate region id " + std::to_string(poly.region_id));
    }

    for (const RoiPolygon& poly : set.regions) {
        for (const Vec2& p : poly.exterior) set.crs_bounds.expand(p);
        for (const auto& hole : poly.holes)
            for (const Vec2& p : hole) set.crs_bounds.expand(p);
    }
    return set;
}

}  // namespace roverlay
