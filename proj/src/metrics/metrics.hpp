#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model/network.hpp"

namespace sg2vec {

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    void add(int label, int prediction);
    Confusion& operator+=(const Confusion& o);
};

// (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)); 0 when any factor of
// the denominator is zero.
double mcc(const Confusion& c);

// (tp+tn) / total
double accuracy(const Confusion& c);

// Mann-Whitney rank AUC; ties contribute 1/2. Throws ContractError when only
// one class is present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct AtpResult {
    double atp_frames = 0.0;      // mean first-positive index (1-based)
    double avg_seq_len = 0.0;
    double ratio = 0.0;           // atp / avg_seq_len
    double detection_fraction = 0.0;  // clips with at least one collision prediction
    int clips = 0;
};

// Average time of prediction over collision clips. A clip whose trace never
// predicts collision contributes its full length. Throws ContractError on an
// empty set or a non-collision trace.
AtpResult atp(const std::vector<PredictionTrace>& collision_traces);

struct MetricsReport {
    Confusion confusion;
    double accuracy = 0.0;
    double auc = 0.0;
    double mcc = 0.0;
    AtpResult atp;
    // clip-level majority vote (secondary view)
    Confusion clip_confusion;
    double clip_accuracy = 0.0;
    int frames = 0;
    int clips = 0;
};

// Frame-level metrics (plus per-clip majority vote and ATP) from traces.
MetricsReport compute_metrics(const std::vector<PredictionTrace>& traces);

}  // namespace sg2vec
