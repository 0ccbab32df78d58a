#include "graph/dataset_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "util/errors.hpp"

namespace sg2vec {

using nlohmann::json;

namespace {

struct RawRecord {
    std::string clip_id;
    int frame_index;
    int label;
    json objects;
    int line_no;
};

json parse_line(const std::string& line, int line_no, const std::string& path) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw SchemaError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
}

template <typename T>
T require_field(const json& j, const char* key, int line_no, const std::string& path) {
    if (!j.contains(key)) {
        throw SchemaError(path + ":" + std::to_string(line_no) + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(path + ":" + std::to_string(line_no) + ": field '" + key + "' has wrong type");
    }
}

}  // namespace

Dataset load_dataset_jsonl(const std::string& path, const Vocabulary& vocab,
                           const std::optional<BevCalibration>& calib) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);

    Dataset ds;
    std::map<std::string, std::size_t> clip_index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = parse_line(line, line_no, path);

        FrameObjects frame;
        frame.clip_id = require_field<std::string>(j, "clip_id", line_no, path);
        frame.frame_index = require_field<int>(j, "frame_index", line_no, path);
        frame.label = require_field<int>(j, "label", line_no, path);
        if (frame.label != 0 && frame.label != 1) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
        }
        const json& objs = j.contains("objects") ? j.at("objects") : json::array();
        if (!objs.is_array()) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": 'objects' must be an array");
        }
        for (const auto& o : objs) {
            ObjectAnnotation a;
            a.id = require_field<std::string>(o, "id", line_no, path);
            a.cls = require_field<std::string>(o, "class", line_no, path);
            if (!vocab.contains(a.cls)) {
                throw SchemaError(path + ":" + std::to_string(line_no) + ": unknown class '" + a.cls + "'");
            }
            if (o.contains("x_px") || o.contains("y_px")) {
                if (!calib) {
                    throw SchemaError(path + ":" + std::to_string(line_no) +
                                      ": pixel coordinates present but no calibration supplied");
                }
                const double u = require_field<double>(o, "x_px", line_no, path);
                const double v = require_field<double>(o, "y_px", line_no, path);
                try {
                    const auto [x, y] = bev_project(u, v, *calib);
                    a.x_ft = x;
                    a.y_ft = y;
                } catch (const ProjectionError&) {
                    continue;  // horizon point: drop the object
                }
            } else {
                a.x_ft = require_field<double>(o, "x_ft", line_no, path);
                a.y_ft = require_field<double>(o, "y_ft", line_no, path);
            }
            if (!std::isfinite(a.x_ft) || !std::isfinite(a.y_ft)) {
                throw SchemaError(path + ":" + std::to_string(line_no) + ": non-finite coordinates for object " + a.id);
            }
            for (const auto& prev : frame.objects) {
                if (prev.id == a.id) {
                    throw SchemaError(path + ":" + std::to_string(line_no) + ": duplicate object id '" + a.id + "'");
                }
            }
            frame.objects.push_back(std::move(a));
        }

        auto [it, inserted] = clip_index.try_emplace(frame.clip_id, ds.clips.size());
        if (inserted) {
            Clip c;
            c.clip_id = frame.clip_id;
            c.label = frame.label;
            ds.clips.push_back(std::move(c));
        }
        Clip& clip = ds.clips[it->second];
        if (frame.label != clip.label) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": clip '" + frame.clip_id +
                              "' mixes labels (frame label differs from clip label)");
        }
        if (!clip.frames.empty() && frame.frame_index <= clip.frames.back().frame_index) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": clip '" + frame.clip_id +
                              "' frame_index not strictly increasing");
        }
        clip.frames.push_back(std::move(frame));
    }
    if (ds.clips.empty()) throw SchemaError("dataset is empty: " + path);
    return ds;
}

void save_dataset_jsonl(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset: " + path);
    for (const auto& clip : dataset.clips) {
        for (const auto& frame : clip.frames) {
            json objs = json::array();
            for (const auto& o : frame.objects) {
                objs.push_back({{"id", o.id}, {"class", o.cls}, {"x_ft", o.x_ft}, {"y_ft", o.y_ft}});
            }
            const json j = {{"clip_id", frame.clip_id},
                            {"frame_index", frame.frame_index},
                            {"label", frame.label},
                            {"objects", std::move(objs)}};
            out << j.dump() << "\n";
        }
    }
}

std::string ValidationReport::to_json() const {
    json issues_json = json::array();
    for (const auto& issue : issues) {
        issues_json.push_back({{"where", issue.where}, {"what", issue.what}});
    }
    const json j = {{"ok", ok},
                    {"clips", clips},
                    {"frames", frames},
                    {"collision_clips", collision_clips},
                    {"non_collision_clips", non_collision_clips},
                    {"class_ratio", class_ratio},
                    {"frames_per_clip", {{"mean", mean_frames}, {"min", min_frames}, {"max", max_frames}}},
                    {"issues", std::move(issues_json)}};
    return j.dump(2);
}

ValidationReport validate_dataset(const std::string& path, const Vocabulary& vocab) {
    ValidationReport report;
    std::ifstream in(path);
    if (!in) {
        report.issues.push_back({path, "cannot open file"});
        return report;
    }

    struct ClipStat {
        int label = -1;
        int last_frame = -1;
        int frames = 0;
    };
    std::map<std::string, ClipStat> clips;
    std::string line;
    int line_no = 0;
    auto issue = [&](const std::string& where, const std::string& what) {
        if (report.issues.size() < 100) report.issues.push_back({where, what});
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            issue(where, std::string("invalid JSON: ") + e.what());
            continue;
        }
        if (!j.contains("clip_id") || !j["clip_id"].is_string() || !j.contains("frame_index") ||
            !j["frame_index"].is_number_integer() || !j.contains("label") || !j["label"].is_number_integer()) {
            issue(where, "missing or mistyped clip_id/frame_index/label");
            continue;
        }
        const std::string clip_id = j["clip_id"].get<std::string>();
        const int frame_index = j["frame_index"].get<int>();
        const int label = j["label"].get<int>();
        if (label != 0 && label != 1) issue("clip " + clip_id, "label " + std::to_string(label) + " is not 0/1");

        ClipStat& stat = clips[clip_id];
        if (stat.label == -1) {
            stat.label = label;
        } else if (stat.label != label) {
            issue("clip " + clip_id, "mixed frame labels within the clip");
        }
        if (stat.frames > 0 && frame_index <= stat.last_frame) {
            issue("clip " + clip_id, "frame_index not strictly increasing at line " + std::to_string(line_no));
        }
        stat.last_frame = frame_index;
        stat.frames += 1;
        report.frames += 1;

        if (j.contains("objects")) {
            if (!j["objects"].is_array()) {
                issue(where, "'objects' is not an array");
                continue;
            }
            for (const auto& o : j["objects"]) {
                if (!o.contains("class") || !o["class"].is_string()) {
                    issue(where, "object without a class");
                    continue;
                }
                const std::string cls = o["class"].get<std::string>();
                if (!vocab.contains(cls)) issue(where, "unknown class '" + cls + "'");
                const bool has_ft = o.contains("x_ft") && o.contains("y_ft");
                const bool has_px = o.contains("x_px") && o.contains("y_px");
                if (!has_ft && !has_px) issue(where, "object without coordinates");
            }
        }
    }

    report.clips = static_cast<int>(clips.size());
    int min_f = 0, max_f = 0;
    long total_f = 0;
    bool first = true;
    for (const auto& [id, stat] : clips) {
        if (stat.label == 1) {
            report.collision_clips += 1;
        } else {
            report.non_collision_clips += 1;
        }
        total_f += stat.frames;
        if (first || stat.frames < min_f) min_f = stat.frames;
        if (first || stat.frames > max_f) max_f = stat.frames;
        first = false;
    }
    report.min_frames = min_f;
    report.max_frames = max_f;
    report.mean_frames = clips.empty() ? 0.0 : static_cast<double>(total_f) / clips.size();
    report.class_ratio = report.collision_clips > 0
                             ? static_cast<double>(report.non_collision_clips) / report.collision_clips
                             : 0.0;
    if (report.clips == 0) issue(path, "no records");
    report.ok = report.issues.empty();
    return report;
}

ExtractSummary write_scene_graph_cache(const Dataset& dataset, const ExtractionConfig& config,
                                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    ExtractSummary summary;
    json index = json::array();
    for (const auto& clip : dataset.clips) {
        json frames = json::array();
        for (const auto& frame : clip.frames) {
            const SceneGraph g = extract_scene_graph(frame, config);
            json nodes = json::array();
            for (const auto& node : g.nodes) {
                nodes.push_back({{"id", node.id}, {"class", node.cls}, {"name", node.name}});
            }
            json edges = json::array();
            for (const auto& e : g.edges) {
                edges.push_back({{"src", e.src}, {"dst", e.dst}, {"relation", relation_name(e.relation)}});
            }
            summary.nodes += g.node_count();
            summary.edges += static_cast<int>(g.edges.size());
            summary.frames += 1;
            frames.push_back({{"frame_index", frame.frame_index}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}});
        }
        const json clip_json = {{"clip_id", clip.clip_id}, {"label", clip.label}, {"frames", std::move(frames)}};
        const std::string file = clip.clip_id + ".json";
        std::ofstream out(fs::path(out_dir) / file);
        if (!out) throw IoError("cannot write scene-graph cache: " + (fs::path(out_dir) / file).string());
        out << clip_json.dump(2) << "\n";
        index.push_back({{"clip_id", clip.clip_id}, {"label", clip.label}, {"file", file}});
        summary.clips += 1;
    }
    std::ofstream out(fs::path(out_dir) / "index.json");
    out << index.dump(2) << "\n";
    return summary;
}

}  // namespace sg2vec
