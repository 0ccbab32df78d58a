#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "util/errors.hpp"

namespace sg2vec {

void Confusion::add(int label, int prediction) {
    if (label == 1) {
        prediction == 1 ? ++tp : ++fn;
    } else {
        prediction == 1 ? ++fp : ++tn;
    }
}

Confusion& Confusion::operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

double mcc(const Confusion& c) {
    const double p1 = static_cast<double>(c.tp + c.fp);
    const double p2 = static_cast<double>(c.tp + c.fn);
    const double p3 = static_cast<double>(c.tn + c.fp);
    const double p4 = static_cast<double>(c.tn + c.fn);
    if (p1 == 0.0 || p2 == 0.0 || p3 == 0.0 || p4 == 0.0) return 0.0;
    const double num = static_cast<double>(c.tp) * c.tn - static_cast<double>(c.fp) * c.fn;
    return num / std::sqrt(p1 * p2 * p3 * p4);
}

double accuracy(const Confusion& c) {
    if (c.total() == 0) throw ContractError("accuracy: empty confusion");
    return static_cast<double>(c.tp + c.tn) / c.total();
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw ContractError("auc: scores and labels differ in length");
    }
    std::int64_t n_pos = 0, n_neg = 0;
    for (int l : labels) {
        l == 1 ? ++n_pos : ++n_neg;
    }
    if (n_pos == 0 || n_neg == 0) {
        throw ContractError("auc: undefined with a single class present");
    }

    // average ranks with tie groups sharing the mean rank
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) rank_sum_pos += mean_rank;
        }
        i = j + 1;
    }
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

AtpResult atp(const std::vector<PredictionTrace>& collision_traces) {
    if (collision_traces.empty()) throw ContractError("atp: no collision clips");
    AtpResult r;
    double sum_first = 0.0, sum_len = 0.0;
    int detected = 0;
    for (const auto& trace : collision_traces) {
        if (trace.label != 1) throw ContractError("atp: clip " + trace.clip_id + " is not a collision clip");
        const int len = static_cast<int>(trace.frames.size());
        const int first = trace.first_positive();
        if (first > 0) {
            sum_first += first;
            ++detected;
        } else {
            sum_first += len;  // undetected: pessimistic full length
        }
        sum_len += len;
    }
    r.clips = static_cast<int>(collision_traces.size());
    r.atp_frames = sum_first / r.clips;
    r.avg_seq_len = sum_len / r.clips;
    r.ratio = r.atp_frames / r.avg_seq_len;
    r.detection_fraction = static_cast<double>(detected) / r.clips;
    return r;
}

MetricsReport compute_metrics(const std::vector<PredictionTrace>& traces) {
    MetricsReport report;
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<PredictionTrace> collision_traces;
    for (const auto& trace : traces) {
        int votes1 = 0;
        for (const auto& f : trace.frames) {
            report.confusion.add(trace.label, f.decision);
            scores.push_back(std::exp(f.logp1));  // positive-class probability
            labels.push_back(trace.label);
            votes1 += f.decision;
        }
        const int clip_pred = 2 * votes1 > static_cast<int>(trace.frames.size()) ? 1 : 0;
        report.clip_confusion.add(trace.label, clip_pred);
        if (trace.label == 1) collision_traces.push_back(trace);
        report.frames += static_cast<int>(trace.frames.size());
    }
    report.clips = static_cast<int>(traces.size());
    report.accuracy = accuracy(report.confusion);
    report.clip_accuracy = accuracy(report.clip_confusion);
    report.mcc = mcc(report.confusion);
    bool has_pos = false, has_neg = false;
    for (int l : labels) (l == 1 ? has_pos : has_neg) = true;
    report.auc = (has_pos && has_neg) ? auc(scores, labels) : 0.0;
    if (!collision_traces.empty()) report.atp = atp(collision_traces);
    return report;
}

}  // namespace sg2vec
