#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model/network.hpp"

namespace sg2vec {

struct FoldSplit {
    int fold_id = 0;
    std::vector<int> train;  // clip indices
    std::vector<int> test;
};

// Stratified k-fold split over clip labels: per-fold class counts stay within
// one clip of proportional. Deterministic given the seed. Throws
// ContractError if either class has fewer than k clips.
std::vector<FoldSplit> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed);

// Stratified train/validation carve-out (fraction of the given indices).
struct TrainValSplit {
    std::vector<int> train;
    std::vector<int> val;
};
TrainValSplit split_train_val(const std::vector<int>& indices, const std::vector<int>& labels,
                              double val_fraction, std::uint64_t seed);

// w_c = total / (2 * count_c); throws TrainingError when a class is missing.
ClassWeights class_weights_auto(const std::vector<int>& labels);

}  // namespace sg2vec
