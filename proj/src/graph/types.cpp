#include "graph/types.hpp"

#include <algorithm>

#include "util/errors.hpp"

namespace sg2vec {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw SchemaError("vocabulary: empty class list");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        for (std::size_t j = i + 1; j < names_.size(); ++j) {
            if (names_[i] == names_[j]) throw SchemaError("vocabulary: duplicate class " + names_[i]);
        }
    }
    for (const char* required : {"ego_car", "left_lane", "middle_lane", "right_lane"}) {
        if (!contains(required)) throw SchemaError(std::string("vocabulary: missing required class ") + required);
    }
}

Vocabulary Vocabulary::defaults() {
    return Vocabulary({"ego_car", "car", "truck", "motorcycle", "bicycle", "pedestrian", "left_lane",
                       "middle_lane", "right_lane", "obstacle"});
}

int Vocabulary::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    throw SchemaError("unknown entity class: " + name);
}

bool Vocabulary::contains(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool is_vehicle_class(const std::string& name) {
    return name == "car" || name == "truck" || name == "motorcycle" || name == "bicycle";
}

bool is_lane_class(const std::string& name) {
    return name == "left_lane" || name == "middle_lane" || name == "right_lane";
}

namespace {

const std::array<std::string, kRelationCount> kRelationNames = {
    "Near_Collision", "Super_Near", "Very_Near",  "Near",       "Visible",
    "Front_Left",     "Left_Front", "Left_Rear",  "Rear_Left",  "Rear_Right",
    "Right_Rear",     "Right_Front", "Front_Right", "isIn",
};

}  // namespace

int relation_index(ProximityBand band) {
    return static_cast<int>(band);
}

int relation_index(DirectionalSector sector) {
    return kProximityBandCount + static_cast<int>(sector);
}

const std::string& relation_name(int relation) {
    return kRelationNames.at(relation);
}

int relation_index_of_name(const std::string& name) {
    for (int i = 0; i < kRelationCount; ++i) {
        if (kRelationNames[i] == name) return i;
    }
    throw SchemaError("unknown relation: " + name);
}

int Dataset::clip_count(int label) const {
    int n = 0;
    for (const auto& c : clips) {
        if (c.label == label) ++n;
    }
    return n;
}

std::size_t Dataset::frame_count() const {
    std::size_t n = 0;
    for (const auto& c : clips) n += c.frames.size();
    return n;
}

int GraphDataset::clip_count(int label) const {
    int n = 0;
    for (const auto& c : clips) {
        if (c.label == label) ++n;
    }
    return n;
}

}  // namespace sg2vec
