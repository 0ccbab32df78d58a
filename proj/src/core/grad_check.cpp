#include "core/grad_check.hpp"

#include <cmath>

#include "util/errors.hpp"

namespace sg2vec {

namespace {

double evaluate(const LossBuilder& build_loss, const ParamStore& params) {
    Tape tape;
    const TapedParams taped = inject_params(tape, params);
    const Tape::NodeId loss = build_loss(tape, taped);
    const Tensor2& v = tape.value(loss);
    if (v.rows != 1 || v.cols != 1) {
        throw ContractError("grad_check: closure returned non-scalar " + v.shape_str());
    }
    return v.at(0, 0);
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& build_loss, const ParamStore& params, double fd_step) {
    const double base1 = evaluate(build_loss, params);
    const double base2 = evaluate(build_loss, params);
    if (base1 != base2) {
        throw ContractError("grad_check: closure is non-deterministic (two evaluations differ)");
    }

    Tape tape;
    const TapedParams taped = inject_params(tape, params);
    tape.backward(build_loss(tape, taped));
    const GradMap analytic = collect_grads(tape, taped);

    ParamStore work = params;
    GradCheckReport report;
    for (const auto& [name, tensor] : params.tensors) {
        const Tensor2& a = analytic.at(name);
        Tensor2& w = work.at(name);
        double worst = 0.0;
        for (std::size_t i = 0; i < w.data.size(); ++i) {
            const double saved = w.data[i];
            w.data[i] = saved + fd_step;
            const double plus = evaluate(build_loss, work);
            w.data[i] = saved - fd_step;
            const double minus = evaluate(build_loss, work);
            w.data[i] = saved;
            const double numeric = (plus - minus) / (2.0 * fd_step);
            const double denom = std::max({1.0, std::fabs(a.data[i]), std::fabs(numeric)});
            worst = std::max(worst, std::fabs(a.data[i] - numeric) / denom);
        }
        report.per_param.push_back({name, worst});
        report.worst = std::max(report.worst, worst);
    }
    return report;
}

}  // namespace sg2vec
