#pragma once

#include "core/params.hpp"

namespace sg2vec {

// Clips gradients in place to a maximum global L2 norm; returns the original
// norm.
double clip_global_norm(GradMap& grads, double max_norm);

// Adam with bias correction. State lives here; one instance per training run.
class AdamOptimizer {
  public:
    AdamOptimizer(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

    void step(ParamStore& params, const GradMap& grads);

  private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    GradMap m_, v_;
};

}  // namespace sg2vec
