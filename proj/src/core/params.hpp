#pragma once

#include <map>
#include <string>

#include "core/tape.hpp"
#include "core/tensor.hpp"

namespace sg2vec {

// Named trainable tensors. std::map keeps iteration order deterministic,
// which checkpointing and the optimizer rely on.
struct ParamStore {
    std::map<std::string, Tensor2> tensors;

    Tensor2& at(const std::string& name);
    const Tensor2& at(const std::string& name) const;
    bool contains(const std::string& name) const { return tensors.count(name) != 0; }
    std::size_t element_count() const;
};

// Gradient of one parameter; shape always equals the parameter's shape.
struct Grad {
    std::string param_id;
    Tensor2 value;
};

using GradMap = std::map<std::string, Tensor2>;

// Tape node ids of parameters injected as leaves for one forward pass.
struct TapedParams {
    std::map<std::string, Tape::NodeId> ids;

    Tape::NodeId at(const std::string& name) const;
};

TapedParams inject_params(Tape& tape, const ParamStore& params);

// Gradient for every injected parameter; zeros where a parameter does not
// reach the loss.
GradMap collect_grads(const Tape& tape, const TapedParams& taped);

}  // namespace sg2vec
