#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/params.hpp"

namespace sg2vec {

// Builds a scalar loss on the given tape from injected parameters. Must be
// deterministic (no dropout, fixed data).
using LossBuilder = std::function<Tape::NodeId(Tape&, const TapedParams&)>;

struct GradCheckEntry {
    std::string param;
    double worst_rel_err;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> per_param;
    double worst = 0.0;

    bool pass(double tolerance) const { return worst < tolerance; }
};

// Compares tape gradients against central finite differences, element by
// element. Relative error per element is |a - n| / max(1, |a|, |n|).
// Evaluates the unperturbed loss twice first; if the two values differ the
// closure is non-deterministic and a ContractError is thrown.
GradCheckReport grad_check(const LossBuilder& build_loss, const ParamStore& params, double fd_step = 1e-5);

}  // namespace sg2vec
