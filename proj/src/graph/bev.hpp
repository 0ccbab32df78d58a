#pragma once

#include <array>
#include <string>
#include <utility>

namespace sg2vec {

// Image-plane to ground-plane projection. The homography maps pixel
// coordinates (u, v, 1) to homogeneous ground-plane feet.
struct BevCalibration {
    std::array<double, 9> homography;  // row-major 3x3
    double lane_width_ft = 12.0;
    double lane_marking_length_ft = 10.0;

    static BevCalibration identity();
    static BevCalibration load(const std::string& path);

    // throws ContractError if the homography is singular (|det| <= 1e-9)
    void validate() const;
    double det() const;
};

// (u, v) pixels -> (x, y) feet. Throws ProjectionError when the point maps to
// the horizon (|w| <= 1e-9); the caller drops the object.
std::pair<double, double> bev_project(double u, double v, const BevCalibration& calib);

}  // namespace sg2vec
