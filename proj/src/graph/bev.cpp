#include "graph/bev.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "util/errors.hpp"

namespace sg2vec {

BevCalibration BevCalibration::identity() {
    BevCalibration c;
    c.homography = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return c;
}

double BevCalibration::det() const {
    const auto& h = homography;
    return h[0] * (h[4] * h[8] - h[5] * h[7]) - h[1] * (h[3] * h[8] - h[5] * h[6]) +
           h[2] * (h[3] * h[7] - h[4] * h[6]);
}

void BevCalibration::validate() const {
    if (std::fabs(det()) <= 1e-9) {
        throw ContractError("bev calibration: homography is singular (|det| = " + std::to_string(std::fabs(det())) + ")");
    }
}

BevCalibration BevCalibration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open calibration file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("calibration file " + path + ": " + e.what());
    }
    if (!j.contains("homography") || !j["homography"].is_array() || j["homography"].size() != 9) {
        throw SchemaError("calibration file " + path + ": 'homography' must be a 9-element row-major array");
    }
    BevCalibration c;
    for (int i = 0; i < 9; ++i) c.homography[i] = j["homography"][i].get<double>();
    c.lane_width_ft = j.value("lane_width_ft", 12.0);
    c.lane_marking_length_ft = j.value("lane_marking_length_ft", 10.0);
    c.validate();
    return c;
}

std::pair<double, double> bev_project(double u, double v, const BevCalibration& calib) {
    const auto& h = calib.homography;
    const double hx = h[0] * u + h[1] * v + h[2];
    const double hy = h[3] * u + h[4] * v + h[5];
    const double hw = h[6] * u + h[7] * v + h[8];
    if (std::fabs(hw) <= 1e-9) {
        throw ProjectionError("bev_project: point (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") maps to the horizon");
    }
    return {hx / hw, hy / hw};
}

}  // namespace sg2vec
