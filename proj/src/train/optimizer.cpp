#include "train/optimizer.hpp"

#include <cmath>

#include "util/errors.hpp"

namespace sg2vec {

double clip_global_norm(GradMap& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& [name, g] : grads) {
        for (double v : g.data) sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (auto& [name, g] : grads) {
            for (double& v : g.data) v *= scale;
        }
    }
    return norm;
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void AdamOptimizer::step(ParamStore& params, const GradMap& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (auto& [name, p] : params.tensors) {
        auto git = grads.find(name);
        if (git == grads.end()) throw ContractError("adam: missing gradient for " + name);
        const Tensor2& g = git->second;
        if (!g.same_shape(p)) {
            throw DimensionError("adam: gradient shape " + g.shape_str() + " vs parameter " + p.shape_str() +
                                 " for " + name);
        }
        auto& m = m_.try_emplace(name, Tensor2(p.rows, p.cols)).first->second;
        auto& v = v_.try_emplace(name, Tensor2(p.rows, p.cols)).first->second;
        for (std::size_t i = 0; i < p.data.size(); ++i) {
            m.data[i] = beta1_ * m.data[i] + (1.0 - beta1_) * g.data[i];
            v.data[i] = beta2_ * v.data[i] + (1.0 - beta2_) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            p.data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace sg2vec
