#include "core/params.hpp"

#include "util/errors.hpp"

namespace sg2vec {

Tensor2& ParamStore::at(const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw ContractError("unknown parameter: " + name);
    return it->second;
}

const Tensor2& ParamStore::at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw ContractError("unknown parameter: " + name);
    return it->second;
}

std::size_t ParamStore::element_count() const {
    std::size_t n = 0;
    for (const auto& [name, t] : tensors) n += t.size();
    return n;
}

Tape::NodeId TapedParams::at(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw ContractError("parameter not injected: " + name);
    return it->second;
}

TapedParams inject_params(Tape& tape, const ParamStore& params) {
    TapedParams taped;
    for (const auto& [name, tensor] : params.tensors) {
        taped.ids[name] = tape.leaf(tensor);
    }
    return taped;
}

GradMap collect_grads(const Tape& tape, const TapedParams& taped) {
    GradMap grads;
    for (const auto& [name, id] : taped.ids) {
        grads[name] = tape.grad(id);
    }
    return grads;
}

}  // namespace sg2vec
