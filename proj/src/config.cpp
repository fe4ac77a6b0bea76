#include "sarcd/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "sarcd/errors.hpp"

namespace sarcd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_object(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ParameterError("configuration must be a JSON object");
    return j;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* where) {
    for (const auto& [key, value] : j.items())
        if (!known.contains(key)) throw ParameterError(std::string("unknown ") + where + " field \"" + key + "\"");
}

template <typename T>
void read(const json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParameterError(std::string("field \"") + key + "\": " + e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view text) {
    const json j = parse_object(text);
    reject_unknown(j,
                   {"k", "T", "gamma", "b", "delta", "lambda", "L1", "L2", "sample_fraction", "sample_ratio", "svm_C",
                    "svm_epochs", "fcm_m", "fcm_tol", "fcm_max_iter", "gabor", "seed"},
                   "pipeline");
    PipelineConfig c;
    read(j, "k", c.k);
    read(j, "T", c.T);
    read(j, "gamma", c.gamma);
    read(j, "b", c.b);
    read(j, "delta", c.delta);
    read(j, "lambda", c.lambda);
    read(j, "L1", c.L1);
    read(j, "L2", c.L2);
    read(j, "sample_fraction", c.sample_fraction);
    read(j, "sample_ratio", c.sample_ratio);
    read(j, "svm_C", c.svm_C);
    read(j, "svm_epochs", c.svm_epochs);
    read(j, "fcm_m", c.fcm_m);
    read(j, "fcm_tol", c.fcm_tol);
    read(j, "fcm_max_iter", c.fcm_max_iter);
    read(j, "seed", c.seed);
    if (j.contains("gabor")) {
        const json& g = j.at("gabor");
        if (!g.is_object()) throw ParameterError("\"gabor\" must be an object");
        reject_unknown(g, {"scales", "orientations", "kernel_size", "f_max", "scale_factor", "sigma"}, "gabor");
        read(g, "scales", c.gabor.scales);
        read(g, "orientations", c.gabor.orientations);
        read(g, "kernel_size", c.gabor.kernel_size);
        read(g, "f_max", c.gabor.f_max);
        read(g, "scale_factor", c.gabor.scale_factor);
        read(g, "sigma", c.gabor.sigma);
    }
    c.validate();
    return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return parse_pipeline_config(read_text(path));
}

std::string pipeline_config_json(const PipelineConfig& c) {
    ordered_json j;
    j["k"] = c.k;
    j["T"] = c.T;
    j["gamma"] = c.gamma;
    j["b"] = c.b;
    j["delta"] = c.delta;
    j["lambda"] = c.lambda;
    j["L1"] = c.L1;
    j["L2"] = c.L2;
    j["sample_fraction"] = c.sample_fraction;
    j["sample_ratio"] = c.sample_ratio;
    j["svm_C"] = c.svm_C;
    j["svm_epochs"] = c.svm_epochs;
    j["fcm_m"] = c.fcm_m;
    j["fcm_tol"] = c.fcm_tol;
    j["fcm_max_iter"] = c.fcm_max_iter;
    j["gabor"] = {{"scales", c.gabor.scales},
                  {"orientations", c.gabor.orientations},
                  {"kernel_size", c.gabor.kernel_size},
                  {"f_max", c.gabor.f_max},
                  {"scale_factor", c.gabor.scale_factor},
                  {"sigma", c.gabor.sigma}};
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

SceneSpec parse_scene_spec(std::string_view text) {
    const json j = parse_object(text);
    reject_unknown(j,
                   {"width", "height", "looks", "n_regions", "region_radius", "change_gain", "allow_darkening",
                    "target_ir", "background", "seed"},
                   "scene");
    SceneSpec s = default_scene();
    read(j, "width", s.width);
    read(j, "height", s.height);
    read(j, "looks", s.looks);
    read(j, "n_regions", s.n_regions);
    read(j, "change_gain", s.change_gain);
    read(j, "allow_darkening", s.allow_darkening);
    read(j, "target_ir", s.target_ir);
    read(j, "seed", s.seed);
    if (j.contains("region_radius")) {
        const json& r = j.at("region_radius");
        if (!r.is_array() || r.size() != 2) throw ParameterError("\"region_radius\" must be [min, max]");
        s.radius_min = r[0].get<double>();
        s.radius_max = r[1].get<double>();
    }
    if (j.contains("background")) {
        const json& bg = j.at("background");
        if (!bg.is_object()) throw ParameterError("\"background\" must be an object");
        reject_unknown(bg, {"level", "rects"}, "background");
        read(bg, "level", s.background.level);
        if (bg.contains("rects")) {
            s.background.rects.clear();
            for (const json& r : bg.at("rects")) {
                reject_unknown(r, {"x", "y", "w", "h", "level"}, "rect");
                Rect rect;
                read(r, "x", rect.x);
                read(r, "y", rect.y);
                read(r, "w", rect.w);
                read(r, "h", rect.h);
                read(r, "level", rect.level);
                s.background.rects.push_back(rect);
            }
        }
    }
    return s;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) { return parse_scene_spec(read_text(path)); }

std::string scene_spec_json(const SceneSpec& s) {
    ordered_json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["looks"] = s.looks;
    j["n_regions"] = s.n_regions;
    j["region_radius"] = {s.radius_min, s.radius_max};
    j["change_gain"] = s.change_gain;
    j["allow_darkening"] = s.allow_darkening;
    j["target_ir"] = s.target_ir;
    ordered_json rects = ordered_json::array();
    for (const auto& r : s.background.rects)
        rects.push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}, {"level", r.level}});
    j["background"] = {{"level", s.background.level}, {"rects", rects}};
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

}  // namespace sarcd
