#include "train/folds.hpp"

#include <algorithm>

#include "util/errors.hpp"
#include "util/rng.hpp"

namespace sg2vec {

std::vector<FoldSplit> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw ContractError("stratified_folds: k must be >= 2");
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(static_cast<int>(i));
    }
    if (static_cast<int>(pos.size()) < k || static_cast<int>(neg.size()) < k) {
        throw ContractError("stratified_folds: need at least " + std::to_string(k) +
                            " clips of each class, have " + std::to_string(pos.size()) + " positive / " +
                            std::to_string(neg.size()) + " negative");
    }

    Rng rng(derive_seed(seed, "folds"));
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<FoldSplit> folds(k);
    for (int f = 0; f < k; ++f) folds[f].fold_id = f;
    // deal each class round-robin so per-fold counts differ by at most one
    for (std::size_t i = 0; i < pos.size(); ++i) folds[i % k].test.push_back(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) folds[i % k].test.push_back(neg[i]);
    for (int f = 0; f < k; ++f) {
        std::sort(folds[f].test.begin(), folds[f].test.end());
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            folds[f].train.insert(folds[f].train.end(), folds[g].test.begin(), folds[g].test.end());
        }
        std::sort(folds[f].train.begin(), folds[f].train.end());
    }
    return folds;
}

TrainValSplit split_train_val(const std::vector<int>& indices, const std::vector<int>& labels,
                              double val_fraction, std::uint64_t seed) {
    std::vector<int> pos, neg;
    for (int i : indices) {
        (labels[i] == 1 ? pos : neg).push_back(i);
    }
    Rng rng(derive_seed(seed, "train-val"));
    rng.shuffle(pos);
    rng.shuffle(neg);

    TrainValSplit split;
    auto deal = [&](std::vector<int>& cls) {
        const std::size_t n_val = static_cast<std::size_t>(cls.size() * val_fraction);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            (i < n_val ? split.val : split.train).push_back(cls[i]);
        }
    };
    deal(pos);
    deal(neg);
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    return split;
}

ClassWeights class_weights_auto(const std::vector<int>& labels) {
    std::int64_t n0 = 0, n1 = 0;
    for (int l : labels) {
        l == 1 ? ++n1 : ++n0;
    }
    if (n0 == 0 || n1 == 0) {
        throw TrainingError("class_weights_auto: dataset contains a single class");
    }
    const double total = static_cast<double>(n0 + n1);
    return {total / (2.0 * n0), total / (2.0 * n1)};
}

}  // namespace sg2vec
