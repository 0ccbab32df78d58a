#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graph/bev.hpp"
#include "graph/extraction.hpp"
#include "graph/types.hpp"

namespace sg2vec {

// Loads a JSON Lines dataset (one record per frame). Clips are grouped by
// clip_id in order of first appearance; frames must arrive with strictly
// increasing frame_index and a consistent label. When a calibration is given,
// records may carry "x_px"/"y_px" instead of "x_ft"/"y_ft"; objects that
// project to the horizon are dropped.
Dataset load_dataset_jsonl(const std::string& path, const Vocabulary& vocab,
                           const std::optional<BevCalibration>& calib = std::nullopt);

void save_dataset_jsonl(const Dataset& dataset, const std::string& path);

struct ValidationIssue {
    std::string where;  // clip id / line reference
    std::string what;
};

struct ValidationReport {
    bool ok = false;
    int clips = 0;
    int frames = 0;
    int collision_clips = 0;
    int non_collision_clips = 0;
    double class_ratio = 0.0;  // non-collision : collision
    double mean_frames = 0.0;
    int min_frames = 0;
    int max_frames = 0;
    std::vector<ValidationIssue> issues;

    std::string to_json() const;
};

// Schema / monotonicity / label-consistency / vocabulary check plus dataset
// statistics. Collects issues instead of throwing.
ValidationReport validate_dataset(const std::string& path, const Vocabulary& vocab);

// Scene-graph cache: one JSON file per clip under out_dir (canonical node
// order), plus an index.json; for inspection and cross-implementation diffs.
struct ExtractSummary {
    int clips = 0;
    int frames = 0;
    int nodes = 0;
    int edges = 0;
};

ExtractSummary write_scene_graph_cache(const Dataset& dataset, const ExtractionConfig& config,
                                       const std::string& out_dir);

}  // namespace sg2vec
