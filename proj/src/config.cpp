#include "lqgwalk/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace lqgwalk {

using nlohmann::json;

namespace {

json yaml_scalar(const YAML::Node& node) {
    const std::string& text = node.Scalar();
    if (node.Tag() == "!") return text; // quoted
    if (text == "~" || text == "null" || text == "Null" || text == "NULL") return nullptr;
    if (text == "true" || text == "True" || text == "TRUE") return true;
    if (text == "false" || text == "False" || text == "FALSE") return false;
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ec == std::errc() && ptr == text.data() + text.size()) return i;
    if (!text.empty()) {
        char* end = nullptr;
        const double d = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size()) return d;
    }
    return text;
}

json yaml_node(const YAML::Node& node) {
    switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return yaml_scalar(node);
    case YAML::NodeType::Sequence: {
        json arr = json::array();
        for (const auto& item : node) arr.push_back(yaml_node(item));
        return arr;
    }
    case YAML::NodeType::Map: {
        json obj = json::object();
        for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_node(kv.second);
        return obj;
    }
    }
    return nullptr;
}

// Reader over one table that remembers which keys were consumed.
class Table {
public:
    Table(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_null() && !doc_.is_object()) throw std::runtime_error(path_ + ": expected a table");
    }

    [[nodiscard]] bool has(const std::string& key) const { return doc_.is_object() && doc_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return doc_.at(key);
    }

    template <typename T> void read(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = raw(key).get<T>();
        } catch (const json::exception& e) {
            throw std::runtime_error(where(key) + ": " + e.what());
        }
    }

    Table sub(const std::string& key) {
        static const json empty = json::object();
        return has(key) ? Table(raw(key), where(key)) : Table(empty, where(key));
    }

    [[nodiscard]] std::string where(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const {
        if (!doc_.is_object()) return;
        for (const auto& [key, _] : doc_.items()) {
            if (!used_.count(key)) throw std::runtime_error("unknown config key: " + where(key));
        }
    }

private:
    const json& doc_;
    std::string path_;
    std::set<std::string> used_;
};

// Matrix entries: a scalar s (s I), a diagonal list, or nested rows.
template <int N> Eigen::Matrix<double, N, N> read_matrix(const json& j, const std::string& where) {
    Eigen::Matrix<double, N, N> m = Eigen::Matrix<double, N, N>::Zero();
    if (j.is_number()) return Eigen::Matrix<double, N, N>::Identity() * j.get<double>();
    if (!j.is_array() || j.size() != N) throw std::runtime_error(where + ": expected a number or " + std::to_string(N) + " entries");
    for (int r = 0; r < N; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (row.is_number()) {
            m(r, r) = row.get<double>();
        } else if (row.is_array() && row.size() == N) {
            for (int c = 0; c < N; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        } else {
            throw std::runtime_error(where + ": malformed matrix row");
        }
    }
    return m;
}

template <int N> json write_matrix(const Eigen::Matrix<double, N, N>& m) {
    json rows = json::array();
    for (int r = 0; r < N; ++r) {
        json row = json::array();
        for (int c = 0; c < N; ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Eigen::Vector2d read_vec2(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

json yaml_to_json(const std::string& text) {
    try {
        return yaml_node(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw std::runtime_error(std::string("yaml: ") + e.what());
    }
}

std::string to_string(PushDirection direction) {
    switch (direction) {
    case PushDirection::Forward: return "forward";
    case PushDirection::Backward: return "backward";
    case PushDirection::Left: return "left";
    case PushDirection::Right: return "right";
    }
    return "?";
}

PushDirection parse_direction(const std::string& text) {
    if (text == "forward" || text == "+x") return PushDirection::Forward;
    if (text == "backward" || text == "-x") return PushDirection::Backward;
    if (text == "left" || text == "+y") return PushDirection::Left;
    if (text == "right" || text == "-y") return PushDirection::Right;
    throw std::invalid_argument("unknown push direction '" + text + "' (forward|backward|left|right|+x|-x|+y|-y)");
}

ScenarioConfig scenario_from_json(const json& doc) {
    ScenarioConfig cfg;
    Table root(doc, "");
    root.read("id", cfg.id);

    Table robot = root.sub("robot");
    robot.read("mass", cfg.robot.mass);
    robot.read("com_height", cfg.robot.com_height);
    robot.read("com_vertical_accel", cfg.robot.com_vertical_accel);
    robot.read("gravity", cfg.robot.gravity);
    robot.read("foot_length", cfg.robot.foot_length);
    robot.read("foot_width", cfg.robot.foot_width);
    robot.finish();

    Table steps = root.sub("steps");
    steps.read("step_length", cfg.steps.step_length);
    steps.read("step_width", cfg.steps.step_width);
    steps.read("double_support", cfg.steps.double_support);
    steps.read("n_steps", cfg.steps.n_steps);
    const bool has_duration = steps.has("step_duration");
    const bool has_single = steps.has("single_support");
    steps.read("step_duration", cfg.steps.step_duration);
    steps.read("single_support", cfg.steps.single_support);
    if (has_duration && !has_single) cfg.steps.single_support = cfg.steps.step_duration - cfg.steps.double_support;
    if (has_single && !has_duration) cfg.steps.step_duration = cfg.steps.single_support + cfg.steps.double_support;
    steps.finish();

    Table walk = root.sub("walk");
    if (walk.has("shape")) {
        const auto shape = walk.raw("shape").get<std::string>();
        if (shape == "straight") cfg.shape = WalkShape::Straight;
        else if (shape == "diagonal") cfg.shape = WalkShape::Diagonal;
        else throw std::runtime_error("walk.shape must be 'straight' or 'diagonal'");
    }
    walk.read("lateral_offset_per_step", cfg.lateral_offset_per_step);
    walk.read("swing_apex", cfg.swing_apex);
    if (walk.has("com_boundary")) {
        const auto b = walk.raw("com_boundary").get<std::string>();
        if (b == "continuous_dcm") cfg.com_boundary = ComBoundary::ContinuousDcm;
        else if (b == "stance_center") cfg.com_boundary = ComBoundary::StanceCenter;
        else throw std::runtime_error("walk.com_boundary must be 'continuous_dcm' or 'stance_center'");
    }
    walk.finish();

    Table noise = root.sub("noise");
    noise.read("enabled", cfg.noise.enabled);
    noise.read("seed", cfg.noise.seed);
    double bound = cfg.noise.model.measurement_bound;
    noise.read("measurement_bound", bound);
    cfg.noise.model = NoiseModel::truncated(bound > 0.0 ? bound : 0.05);
    cfg.noise.model.measurement_bound = bound;
    if (noise.has("measurement_cov"))
        cfg.noise.model.measurement_cov = read_matrix<2>(noise.raw("measurement_cov"), noise.where("measurement_cov"));
    if (noise.has("process_cov"))
        cfg.noise.model.process_cov = read_matrix<2>(noise.raw("process_cov"), noise.where("process_cov"));
    noise.finish();

    Table lqr = root.sub("lqr");
    if (lqr.has("Q")) cfg.lqr.Q = read_matrix<3>(lqr.raw("Q"), lqr.where("Q"));
    lqr.read("R", cfg.lqr.R);
    lqr.finish();

    Table comp = root.sub("compliance");
    comp.read("enabled", cfg.compliance.enabled);
    comp.read("margin", cfg.compliance.margin);
    comp.read("slope", cfg.compliance.slope);
    comp.read("max_offset", cfg.compliance.max_offset);
    comp.read("freeze_time", cfg.compliance.freeze_time);
    comp.read("min_step_width", cfg.compliance.min_step_width);
    comp.finish();

    if (root.has("disturbances")) {
        const json& list = root.raw("disturbances");
        if (!list.is_array()) throw std::runtime_error("disturbances: expected a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            Table ev(list[i], "disturbances[" + std::to_string(i) + "]");
            DisturbanceEvent e;
            ev.read("t_start", e.t_start);
            ev.read("duration", e.duration);
            if (ev.has("force")) e.force = read_vec2(ev.raw("force"), ev.where("force"));
            ev.finish();
            cfg.disturbances.push_back(e);
        }
    }

    Table mismatch = root.sub("model_mismatch");
    if (mismatch.has("actual_com_height") && !mismatch.raw("actual_com_height").is_null()) {
        cfg.actual_com_height = mismatch.raw("actual_com_height").get<double>();
    }
    mismatch.finish();

    Table timing = root.sub("timing");
    timing.read("dt_phys", cfg.dt_phys);
    timing.read("dt_ctrl", cfg.dt_ctrl);
    timing.finish();

    Table fall = root.sub("fall");
    fall.read("dcm_threshold", cfg.fall.dcm_error);
    fall.finish();

    root.finish();
    cfg.validate();
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["id"] = cfg.id;
    j["robot"] = {{"mass", cfg.robot.mass},
                  {"com_height", cfg.robot.com_height},
                  {"com_vertical_accel", cfg.robot.com_vertical_accel},
                  {"gravity", cfg.robot.gravity},
                  {"foot_length", cfg.robot.foot_length},
                  {"foot_width", cfg.robot.foot_width}};
    j["steps"] = {{"step_length", cfg.steps.step_length},
                  {"step_width", cfg.steps.step_width},
                  {"step_duration", cfg.steps.step_duration},
                  {"single_support", cfg.steps.single_support},
                  {"double_support", cfg.steps.double_support},
                  {"n_steps", cfg.steps.n_steps}};
    j["walk"] = {{"shape", cfg.shape == WalkShape::Diagonal ? "diagonal" : "straight"},
                 {"lateral_offset_per_step", cfg.lateral_offset_per_step},
                 {"swing_apex", cfg.swing_apex},
                 {"com_boundary", cfg.com_boundary == ComBoundary::ContinuousDcm ? "continuous_dcm" : "stance_center"}};
    j["noise"] = {{"enabled", cfg.noise.enabled},
                  {"seed", cfg.noise.seed},
                  {"measurement_bound", cfg.noise.model.measurement_bound},
                  {"measurement_cov", write_matrix<2>(cfg.noise.model.measurement_cov)},
                  {"process_cov", write_matrix<2>(cfg.noise.model.process_cov)}};
    j["lqr"] = {{"Q", write_matrix<3>(cfg.lqr.Q)}, {"R", cfg.lqr.R}};
    j["compliance"] = {{"enabled", cfg.compliance.enabled},
                       {"margin", cfg.compliance.margin},
                       {"slope", cfg.compliance.slope},
                       {"max_offset", cfg.compliance.max_offset},
                       {"freeze_time", cfg.compliance.freeze_time},
                       {"min_step_width", cfg.compliance.min_step_width}};
    json events = json::array();
    for (const auto& e : cfg.disturbances) {
        events.push_back({{"t_start", e.t_start}, {"duration", e.duration}, {"force", {e.force.x(), e.force.y()}}});
    }
    j["disturbances"] = events;
    j["model_mismatch"] = {{"actual_com_height", cfg.actual_com_height ? json(*cfg.actual_com_height) : json(nullptr)}};
    j["timing"] = {{"dt_phys", cfg.dt_phys}, {"dt_ctrl", cfg.dt_ctrl}};
    j["fall"] = {{"dcm_threshold", cfg.fall.dcm_error}};
    return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
    const std::string text = scenario_to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    if (path.extension() == ".json") {
        try {
            doc = json::parse(buf.str());
        } catch (const json::exception& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
    } else {
        doc = yaml_to_json(buf.str());
    }
    if (doc.is_null()) doc = json::object();
    return scenario_from_json(doc);
}

} // namespace lqgwalk
