#pragma once

#include <optional>
#include <vector>

#include "graph/types.hpp"

namespace sg2vec {

enum class Units { Feet, Meters };

struct ExtractionConfig {
    double lane_width_ft = 12.0;
    double vehicle_half_width_ft = 3.0;
    std::array<double, 5> proximity_thresholds_ft = kProximityThresholdsFt;
    bool all_pairs_proximity = false;  // default: ego<->object only
    Units units = Units::Feet;
    Vocabulary vocab = Vocabulary::defaults();

    double visible_threshold() const { return proximity_thresholds_ft[4]; }
    double near_threshold() const { return proximity_thresholds_ft[3]; }
};

// Tightest proximity band whose threshold covers dist (upper bound inclusive);
// nullopt beyond the Visible threshold. dist < 0 -> ContractError.
std::optional<ProximityBand> proximity_relation(double dist, const std::array<double, 5>& thresholds = kProximityThresholdsFt);

// 45-degree sector of the displacement (x right, y forward), clockwise from
// the forward axis; nullopt beyond the Near threshold. (0,0) -> ContractError.
std::optional<DirectionalSector> directional_relation(double x, double y, double near_threshold = kProximityThresholdsFt[3]);

enum class LaneId { Left = 0, Middle = 1, Right = 2 };

// Lane membership by lateral span overlap. Far lanes collapse onto the outer
// lane nodes; a span crossing a boundary belongs to both adjacent lanes.
std::vector<LaneId> lane_assignment(double x, double vehicle_half_width, double lane_width);

// Builds the frame's scene graph: ego + 3 lane nodes, one node per annotated
// object within the Visible threshold, and the proximity/directional/isIn
// edges. Object coordinates must already be in ego-relative feet.
SceneGraph extract_scene_graph(const FrameObjects& frame, const ExtractionConfig& config);

// One-hot node features plus per-relation in-neighbor indices.
FrameTensors to_relation_tensors(const SceneGraph& graph, const Vocabulary& vocab);

GraphDataset extract_dataset(const Dataset& dataset, const ExtractionConfig& config, int jobs = 1);

}  // namespace sg2vec
