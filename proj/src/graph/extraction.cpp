#include "graph/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "util/errors.hpp"

namespace sg2vec {

std::optional<ProximityBand> proximity_relation(double dist, const std::array<double, 5>& thresholds) {
    if (dist < 0.0 || !std::isfinite(dist)) {
        throw ContractError("proximity_relation: invalid distance " + std::to_string(dist));
    }
    for (int b = 0; b < kProximityBandCount; ++b) {
        if (dist <= thresholds[b]) return static_cast<ProximityBand>(b);
    }
    return std::nullopt;
}

std::optional<DirectionalSector> directional_relation(double x, double y, double near_threshold) {
    if (x == 0.0 && y == 0.0) {
        throw ContractError("directional_relation: object coincides with ego");
    }
    if (std::hypot(x, y) > near_threshold) return std::nullopt;
    // clockwise-positive angle from the forward axis, in [-180, 180]
    const double theta = std::atan2(x, y) * 180.0 / M_PI;
    if (theta >= 0.0) {
        if (theta < 45.0) return DirectionalSector::FrontRight;
        if (theta < 90.0) return DirectionalSector::RightFront;
        if (theta < 135.0) return DirectionalSector::RightRear;
        return DirectionalSector::RearRight;  // [135, 180]
    }
    if (theta > -45.0) return DirectionalSector::FrontLeft;
    if (theta > -90.0) return DirectionalSector::LeftFront;
    if (theta > -135.0) return DirectionalSector::LeftRear;
    return DirectionalSector::RearLeft;  // [-180, -135]
}

std::vector<LaneId> lane_assignment(double x, double vehicle_half_width, double lane_width) {
    if (lane_width <= 0.0) throw ContractError("lane_assignment: lane_width must be positive");
    const double hw = vehicle_half_width;
    const double boundary = lane_width / 2.0;
    std::vector<LaneId> lanes;
    if (x - hw < -boundary) lanes.push_back(LaneId::Left);
    if (x + hw > -boundary && x - hw < boundary) lanes.push_back(LaneId::Middle);
    if (x + hw > boundary) lanes.push_back(LaneId::Right);
    return lanes;
}

namespace {

constexpr int kEgoNode = 0;

int lane_node(LaneId lane) {
    return 1 + static_cast<int>(lane);  // nodes 1..3: left, middle, right
}

void add_edge(SceneGraph& g, int src, int dst, int relation) {
    g.edges.push_back({src, dst, relation});
}

}  // namespace

SceneGraph extract_scene_graph(const FrameObjects& frame, const ExtractionConfig& config) {
    const double to_feet = config.units == Units::Meters ? 1.0 / 0.3048 : 1.0;

    SceneGraph g;
    g.nodes.push_back({kEgoNode, "ego_car", "ego"});
    g.nodes.push_back({1, "left_lane", "left_lane"});
    g.nodes.push_back({2, "middle_lane", "middle_lane"});
    g.nodes.push_back({3, "right_lane", "right_lane"});

    // ego lane membership (x = 0)
    for (LaneId lane : lane_assignment(0.0, config.vehicle_half_width_ft, config.lane_width_ft)) {
        add_edge(g, kEgoNode, lane_node(lane), kIsInRelation);
    }

    // canonical object order: sorted by object id
    std::vector<const ObjectAnnotation*> objects;
    objects.reserve(frame.objects.size());
    for (const auto& obj : frame.objects) objects.push_back(&obj);
    std::sort(objects.begin(), objects.end(),
              [](const ObjectAnnotation* a, const ObjectAnnotation* b) { return a->id < b->id; });

    struct Placed {
        int node;
        double x, y;
        bool vehicle;
    };
    std::vector<Placed> placed;

    for (const ObjectAnnotation* obj : objects) {
        if (!config.vocab.contains(obj->cls)) {
            throw SchemaError("extract_scene_graph: unknown class '" + obj->cls + "' (object " + obj->id +
                              ", clip " + frame.clip_id + ")");
        }
        if (is_lane_class(obj->cls) || obj->cls == "ego_car") {
            throw SchemaError("extract_scene_graph: class '" + obj->cls + "' cannot appear as an annotated object");
        }
        const double x = obj->x_ft * to_feet;
        const double y = obj->y_ft * to_feet;
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw SchemaError("extract_scene_graph: non-finite coordinates for object " + obj->id);
        }
        const double dist = std::hypot(x, y);
        if (dist > config.visible_threshold()) continue;  // out of range, dropped

        const int node = g.node_count();
        g.nodes.push_back({node, obj->cls, obj->id});
        const bool vehicle = is_vehicle_class(obj->cls);
        placed.push_back({node, x, y, vehicle});

        // proximity: bidirectional pair with ego
        const auto band = proximity_relation(dist, config.proximity_thresholds_ft);
        add_edge(g, kEgoNode, node, relation_index(*band));
        add_edge(g, node, kEgoNode, relation_index(*band));

        // directional: ego -> vehicle only, inside the Near threshold
        if (vehicle && (x != 0.0 || y != 0.0)) {
            if (const auto sector = directional_relation(x, y, config.near_threshold())) {
                add_edge(g, kEgoNode, node, relation_index(*sector));
            }
        }

        // lane membership: a vehicle concept
        if (vehicle) {
            for (LaneId lane : lane_assignment(x, config.vehicle_half_width_ft, config.lane_width_ft)) {
                add_edge(g, node, lane_node(lane), kIsInRelation);
            }
        }
    }

    if (config.all_pairs_proximity) {
        for (std::size_t i = 0; i < placed.size(); ++i) {
            for (std::size_t j = i + 1; j < placed.size(); ++j) {
                const double d = std::hypot(placed[i].x - placed[j].x, placed[i].y - placed[j].y);
                if (d > config.visible_threshold()) continue;
                const auto band = proximity_relation(d, config.proximity_thresholds_ft);
                add_edge(g, placed[i].node, placed[j].node, relation_index(*band));
                add_edge(g, placed[j].node, placed[i].node, relation_index(*band));
            }
        }
    }

    return g;
}

FrameTensors to_relation_tensors(const SceneGraph& graph, const Vocabulary& vocab) {
    const int n = graph.node_count();
    FrameTensors out;
    out.n_nodes = n;
    out.one_hot = Tensor2(n, vocab.size());
    for (const auto& node : graph.nodes) {
        out.one_hot.at(node.id, vocab.index_of(node.cls)) = 1.0;
    }

    // bucket edges per relation, then build CSR over destination rows
    std::array<std::vector<std::pair<int, int>>, kRelationCount> buckets;
    std::vector<std::pair<int, int>> union_bucket;
    for (const auto& e : graph.edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
            throw SchemaError("to_relation_tensors: edge endpoint out of range");
        }
        buckets[e.relation].push_back({e.dst, e.src});
        union_bucket.push_back({e.dst, e.src});
    }

    auto build_csr = [n](std::vector<std::pair<int, int>>& dst_src) {
        NeighborIndex idx;
        idx.offsets.assign(n + 1, 0);
        std::sort(dst_src.begin(), dst_src.end());
        for (const auto& [dst, src] : dst_src) idx.offsets[dst + 1]++;
        for (int v = 0; v < n; ++v) idx.offsets[v + 1] += idx.offsets[v];
        idx.sources.reserve(dst_src.size());
        for (const auto& [dst, src] : dst_src) idx.sources.push_back(src);
        return idx;
    };

    out.relation_present.assign(kRelationCount, 0);
    for (int r = 0; r < kRelationCount; ++r) {
        out.relation_present[r] = buckets[r].empty() ? 0 : 1;
        out.in_neighbors[r] = build_csr(buckets[r]);
    }
    out.union_in_neighbors = build_csr(union_bucket);
    return out;
}

GraphDataset extract_dataset(const Dataset& dataset, const ExtractionConfig& config, int jobs) {
    GraphDataset out;
    out.vocab = config.vocab;
    out.clips.resize(dataset.clips.size());

    auto extract_clip = [&](std::size_t i) {
        const Clip& clip = dataset.clips[i];
        ClipGraphs cg;
        cg.clip_id = clip.clip_id;
        cg.label = clip.label;
        cg.frames.reserve(clip.frames.size());
        for (const auto& frame : clip.frames) {
            cg.frames.push_back(to_relation_tensors(extract_scene_graph(frame, config), config.vocab));
        }
        out.clips[i] = std::move(cg);
    };

    if (jobs <= 1 || dataset.clips.size() < 2) {
        for (std::size_t i = 0; i < dataset.clips.size(); ++i) extract_clip(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next.fetch_add(1); i < dataset.clips.size(); i = next.fetch_add(1)) {
                        extract_clip(i);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return out;
}

}  // namespace sg2vec
