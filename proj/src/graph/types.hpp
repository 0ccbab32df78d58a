#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/tape.hpp"
#include "core/tensor.hpp"

namespace sg2vec {

// ---------------------------------------------------------------------------
// Entity classes
// ---------------------------------------------------------------------------

// Node class vocabulary. Index order is fixed per dataset/run and drives the
// one-hot width, so it is part of every checkpoint.
class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> names);

    static Vocabulary defaults();

    int index_of(const std::string& name) const;  // throws SchemaError if unknown
    bool contains(const std::string& name) const;
    const std::string& name_of(int index) const { return names_[index]; }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const Vocabulary& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
};

bool is_vehicle_class(const std::string& name);
bool is_lane_class(const std::string& name);

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

enum class ProximityBand { NearCollision = 0, SuperNear, VeryNear, Near, Visible };
constexpr int kProximityBandCount = 5;
constexpr std::array<double, 5> kProximityThresholdsFt = {4.0, 7.0, 10.0, 16.0, 25.0};

enum class DirectionalSector {
    FrontLeft = 0,
    LeftFront,
    LeftRear,
    RearLeft,
    RearRight,
    RightRear,
    RightFront,
    FrontRight,
};
constexpr int kDirectionalSectorCount = 8;

// Global relation list: 5 proximity bands, 8 directional sectors, isIn.
// Parameter shapes depend on this order, so it never varies per dataset.
constexpr int kRelationCount = kProximityBandCount + kDirectionalSectorCount + 1;
constexpr int kIsInRelation = kRelationCount - 1;

int relation_index(ProximityBand band);
int relation_index(DirectionalSector sector);
const std::string& relation_name(int relation);
int relation_index_of_name(const std::string& name);  // throws SchemaError

// ---------------------------------------------------------------------------
// Frame annotations (pipeline input)
// ---------------------------------------------------------------------------

struct ObjectAnnotation {
    std::string id;
    std::string cls;
    double x_ft = 0.0;  // lateral, +right of ego
    double y_ft = 0.0;  // longitudinal, +forward of ego
};

struct FrameObjects {
    std::string clip_id;
    int frame_index = 0;
    int label = 0;  // clip-level label copied onto every frame
    std::vector<ObjectAnnotation> objects;
};

struct Clip {
    std::string clip_id;
    int label = 0;
    std::vector<FrameObjects> frames;
};

struct Dataset {
    std::vector<Clip> clips;

    int clip_count(int label) const;
    std::size_t frame_count() const;
};

// ---------------------------------------------------------------------------
// Scene graph
// ---------------------------------------------------------------------------

struct SceneGraphNode {
    int id = 0;
    std::string cls;
    std::string name;  // "ego", lane name, or the source object id
};

struct SceneGraphEdge {
    int src = 0;
    int dst = 0;
    int relation = 0;  // index into the global relation list
};

// Directed heterogeneous multigraph for one frame. Node 0 is always ego;
// nodes 1..3 are the three lanes; objects follow in order of appearance.
struct SceneGraph {
    std::vector<SceneGraphNode> nodes;
    std::vector<SceneGraphEdge> edges;

    int node_count() const { return static_cast<int>(nodes.size()); }
};

// Per-frame tensors consumed by the model.
struct FrameTensors {
    Tensor2 one_hot;  // nodes x vocab
    std::array<NeighborIndex, kRelationCount> in_neighbors;
    std::vector<char> relation_present;  // size kRelationCount
    NeighborIndex union_in_neighbors;    // all relations merged (pooling score)
    int n_nodes = 0;
};

struct ClipGraphs {
    std::string clip_id;
    int label = 0;
    std::vector<FrameTensors> frames;
};

struct GraphDataset {
    std::vector<ClipGraphs> clips;
    Vocabulary vocab;

    int clip_count(int label) const;
};

}  // namespace sg2vec
