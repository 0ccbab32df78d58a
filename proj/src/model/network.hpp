#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/tape.hpp"
#include "graph/types.hpp"
#include "model/config.hpp"
#include "util/rng.hpp"

namespace sg2vec {

enum class RunMode { Train, Eval };

struct ClassWeights {
    double w0 = 1.0;
    double w1 = 1.0;
};

struct FramePrediction {
    double logp0 = 0.0;
    double logp1 = 0.0;
    int decision = 0;  // argmax; tie -> 0
};

struct PredictionTrace {
    std::string clip_id;
    int label = 0;
    std::vector<FramePrediction> frames;

    // 1-based index of the first collision decision; 0 when none
    int first_positive() const;
};

// Fresh parameter tensors for a model configuration. Matrices are uniform in
// +-sqrt(6/(fan_in+fan_out)), biases zero except the LSTM forget-gate slice
// at +1.
ParamStore init_params(const ModelConfig& config, int vocab_size, std::uint64_t seed);

std::size_t param_count(const ParamStore& params);

// ---------------------------------------------------------------------------
// Layer operations (exposed for tests; clip_forward composes them)
// ---------------------------------------------------------------------------

// Pre-activation relational convolution: self transform plus mean-aggregated
// per-relation neighbor transforms. Relations absent from the frame
// contribute nothing. Throws ConfigError if the frame uses a relation the
// weight list does not cover.
Tape::NodeId mrgcn_layer_preact(Tape& tape, Tape::NodeId node_embs, const FrameTensors& frame,
                                Tape::NodeId w_self, const std::vector<Tape::NodeId>& w_rel);

struct PoolResult {
    Tape::NodeId x_pool = -1;   // kept rows, gated by their scores
    Tape::NodeId alpha = -1;    // N x 1 node scores (tanh)
    std::vector<int> kept;      // ascending original node indices
    std::vector<SceneGraphEdge> induced_edges;  // re-indexed to kept order
};

// Self-attention pooling: score from a single-relation graph convolution over
// the union of all edges; keeps ceil(ratio * N) nodes (ties break toward the
// lower node index).
PoolResult sag_pool(Tape& tape, Tape::NodeId x_prop, const FrameTensors& frame, Tape::NodeId w_self,
                    Tape::NodeId w_neigh, double ratio);

// Top-k pooling: score from a learned projection, same selection and gating.
PoolResult topk_pool(Tape& tape, Tape::NodeId x_prop, const FrameTensors& frame, Tape::NodeId w_proj,
                     double ratio);

Tape::NodeId readout(Tape& tape, Tape::NodeId x_pool, ReadoutKind kind);

struct LstmState {
    Tape::NodeId h = -1;
    Tape::NodeId c = -1;
};

struct LstmWeights {
    Tape::NodeId w_x = -1;  // in x 4H, gate order [i, f, g, o]
    Tape::NodeId w_h = -1;  // H x 4H
    Tape::NodeId b = -1;    // 1 x 4H
    int hidden = 0;
};

LstmState lstm_zero_state(Tape& tape, int hidden);

// One cell step; returns {z_n, s_n} with z_n == s_n.h
std::pair<Tape::NodeId, LstmState> lstm_step(Tape& tape, Tape::NodeId x, const LstmState& prev,
                                             const LstmWeights& w);

// MLP head + row log-softmax; 1 x 2 log-probabilities
Tape::NodeId predict_frame(Tape& tape, Tape::NodeId z, Tape::NodeId mlp_w, Tape::NodeId mlp_b);

// ---------------------------------------------------------------------------
// Whole-clip forward
// ---------------------------------------------------------------------------

struct ClipForwardResult {
    PredictionTrace trace;
    Tape::NodeId loss = -1;            // scalar; -1 when with_loss == false
    std::vector<double> frame_losses;  // unweighted per-frame NLL
};

// Runs the full pipeline over a clip. Train mode applies dropout (mask
// resampled per frame from dropout_rng) and requires dropout_rng; class
// weights scale each frame's loss term by the weight of the clip label.
ClipForwardResult clip_forward(Tape& tape, const TapedParams& params, const ClipGraphs& clip,
                               const ModelConfig& config, int vocab_size, RunMode mode,
                               Rng* dropout_rng = nullptr, const ClassWeights* weights = nullptr,
                               bool with_loss = true);

// Eval-mode convenience on a private tape, no loss.
PredictionTrace predict_clip(const ParamStore& params, const ClipGraphs& clip, const ModelConfig& config,
                             int vocab_size);

}  // namespace sg2vec
