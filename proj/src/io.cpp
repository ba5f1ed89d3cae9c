#include "polyplan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyplan/errors.hpp"

namespace polyplan {

namespace {

using nlohmann::json;

// nlohmann reports parse errors by byte offset; map it to line/column.
[[noreturn]] void rethrow_parse_error(const nlohmann::json::parse_error& e,
                                      const std::string& text) {
    size_t line = 1, column = 1;
    const size_t limit = std::min(e.byte, text.size());
    for (size_t i = 0; i + 1 <= limit && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw ValidationError("JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        rethrow_parse_error(e, text);
    }
}

Vec2 vec_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ValidationError(std::string(what) + " must be a [x, y] number pair");
    }
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

json vec_to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out) throw ValidationError("write failed: " + path);
}

PolygonEnvironment parse_environment(const std::string& json_text) {
    const json j = parse_json(json_text);
    if (!j.is_object()) throw ValidationError("environment file must be a JSON object");
    if (!j.contains("vertices") || !j["vertices"].is_array()) {
        throw ValidationError("environment file needs a \"vertices\" array");
    }
    if (!j.contains("polygons") || !j["polygons"].is_array()) {
        throw ValidationError("environment file needs a \"polygons\" array");
    }

    std::vector<Vec2> vertices;
    vertices.reserve(j["vertices"].size());
    for (size_t i = 0; i < j["vertices"].size(); ++i) {
        vertices.push_back(vec_from_json(j["vertices"][i], "vertex"));
    }
    std::vector<std::vector<int>> polygons;
    polygons.reserve(j["polygons"].size());
    for (size_t l = 0; l < j["polygons"].size(); ++l) {
        const json& ring = j["polygons"][l];
        if (!ring.is_array()) {
            throw ValidationError("polygon " + std::to_string(l) + " must be an index array");
        }
        std::vector<int> ids;
        ids.reserve(ring.size());
        for (const auto& e : ring) {
            if (!e.is_number_integer()) {
                throw ValidationError("polygon " + std::to_string(l) +
                                      " contains a non-integer vertex index");
            }
            ids.push_back(e.get<int>());
        }
        polygons.push_back(std::move(ids));
    }
    const double clearance = j.value("clearance", 0.0);
    return PolygonEnvironment(std::move(vertices), std::move(polygons), clearance);
}

PolygonEnvironment load_environment(const std::string& path) {
    return parse_environment(read_text_file(path));
}

std::string environment_to_json(const PolygonEnvironment& env) {
    json j;
    j["vertices"] = json::array();
    for (const Vec2& v : env.vertices()) j["vertices"].push_back(vec_to_json(v));
    j["polygons"] = env.polygons();
    j["clearance"] = env.clearance();
    return j.dump(2) + "\n";
}

void save_environment(const PolygonEnvironment& env, const std::string& path) {
    write_text_file(path, environment_to_json(env));
}

std::string trajectory_to_json(const Trajectory& traj) {
    json j;
    j["arcs"] = json::array();
    for (const CubicArc& arc : traj.arcs) {
        json a;
        a["a3"] = vec_to_json(arc.a3);
        a["a2"] = vec_to_json(arc.a2);
        a["a1"] = vec_to_json(arc.a1);
        a["a0"] = vec_to_json(arc.a0);
        a["t_start"] = arc.t_start;
        a["t_end"] = arc.t_end;
        j["arcs"].push_back(std::move(a));
    }
    j["junctions"] = json::array();
    for (const Junction& jc : traj.junctions) {
        j["junctions"].push_back({{"vertex", jc.vertex}, {"time", jc.time}});
    }
    j["energy"] = trajectory_energy(traj);
    return j.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& json_text) {
    const json j = parse_json(json_text);
    if (!j.is_object() || !j.contains("arcs") || !j["arcs"].is_array()) {
        throw ValidationError("trajectory file needs an \"arcs\" array");
    }
    Trajectory traj;
    for (const auto& a : j["arcs"]) {
        CubicArc arc;
        arc.a3 = vec_from_json(a.at("a3"), "a3");
        arc.a2 = vec_from_json(a.at("a2"), "a2");
        arc.a1 = vec_from_json(a.at("a1"), "a1");
        arc.a0 = vec_from_json(a.at("a0"), "a0");
        arc.t_start = a.at("t_start").get<double>();
        arc.t_end = a.at("t_end").get<double>();
        traj.arcs.push_back(arc);
    }
    if (j.contains("junctions")) {
        for (const auto& jc : j["junctions"]) {
            traj.junctions.push_back({jc.at("vertex").get<int>(), jc.at("time").get<double>()});
        }
    }
    return traj;
}

void save_trajectory_json(const Trajectory& traj, const std::string& path) {
    write_text_file(path, trajectory_to_json(traj));
}

Trajectory load_trajectory_json(const std::string& path) {
    return trajectory_from_json(read_text_file(path));
}

std::string trajectory_to_csv(const Trajectory& traj, double rate_hz) {
    if (traj.arcs.empty()) throw ValidationError("cannot export an empty trajectory");
    if (!(rate_hz > 0.0)) throw ValidationError("export rate must be positive");
    std::ostringstream out;
    out << "t,px,py,vx,vy,ux,uy\n";
    const double t0 = traj.t_start();
    const double tf = traj.t_end();
    const double dt = 1.0 / rate_hz;
    const auto emit = [&](double t) {
        const ArcState s = traj.at(t);
        out << format_double(t) << ',' << format_double(s.p.x()) << ',' << format_double(s.p.y())
            << ',' << format_double(s.v.x()) << ',' << format_double(s.v.y()) << ','
            << format_double(s.u.x()) << ',' << format_double(s.u.y()) << '\n';
    };
    long i = 0;
    for (;; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        if (t >= tf - 1e-12) break;
        emit(t);
    }
    emit(tf);
    return out.str();
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path, double rate_hz) {
    write_text_file(path, trajectory_to_csv(traj, rate_hz));
}

}  // namespace polyplan
