#include "model/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "util/errors.hpp"

namespace sg2vec {

namespace {

std::string rel_param_name(int layer, int relation) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gcn.%d.rel.%02d", layer, relation);
    return buf;
}

std::string self_param_name(int layer) {
    return "gcn." + std::to_string(layer) + ".self";
}

Tensor2 glorot(int rows, int cols, Rng& rng) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    Tensor2 t(rows, cols);
    for (double& v : t.data) v = rng.uniform(-bound, bound);
    return t;
}

}  // namespace

int PredictionTrace::first_positive() const {
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].decision == 1) return static_cast<int>(i) + 1;
    }
    return 0;
}

ParamStore init_params(const ModelConfig& config, int vocab_size, std::uint64_t seed) {
    config.validate();
    ParamStore params;

    int in_dim = vocab_size;
    for (int l = 0; l < config.mrgcn_layers; ++l) {
        params.tensors[self_param_name(l)] = Tensor2(in_dim, config.mrgcn_dim);
        if (config.spatial == SpatialKind::Mrgcn) {
            for (int r = 0; r < kRelationCount; ++r) {
                params.tensors[rel_param_name(l, r)] = Tensor2(in_dim, config.mrgcn_dim);
            }
        }
        in_dim = config.mrgcn_dim;
    }

    const int concat = config.concat_width(vocab_size);
    if (config.pooling == PoolingKind::Sag) {
        params.tensors["pool.self"] = Tensor2(concat, 1);
        params.tensors["pool.neigh"] = Tensor2(concat, 1);
    } else if (config.pooling == PoolingKind::TopK) {
        params.tensors["pool.proj"] = Tensor2(concat, 1);
    }

    if (config.temporal == TemporalKind::Lstm) {
        params.tensors["lstm.w_x"] = Tensor2(concat, 4 * config.lstm_hidden);
        params.tensors["lstm.w_h"] = Tensor2(config.lstm_hidden, 4 * config.lstm_hidden);
        params.tensors["lstm.b"] = Tensor2(1, 4 * config.lstm_hidden);
    }

    params.tensors["mlp.w"] = Tensor2(config.head_width(vocab_size), config.mlp_out);
    params.tensors["mlp.b"] = Tensor2(1, config.mlp_out);

    // fill in name order so initialization is independent of creation order
    Rng rng(derive_seed(seed, "param-init"));
    for (auto& [name, tensor] : params.tensors) {
        if (name == "lstm.b" || name == "mlp.b") continue;  // biases stay zero
        tensor = glorot(tensor.rows, tensor.cols, rng);
    }
    if (config.temporal == TemporalKind::Lstm) {
        Tensor2& b = params.at("lstm.b");
        for (int j = config.lstm_hidden; j < 2 * config.lstm_hidden; ++j) b.at(0, j) = 1.0;  // forget gate
    }
    return params;
}

std::size_t param_count(const ParamStore& params) {
    return params.element_count();
}

Tape::NodeId mrgcn_layer_preact(Tape& tape, Tape::NodeId node_embs, const FrameTensors& frame,
                                Tape::NodeId w_self, const std::vector<Tape::NodeId>& w_rel) {
    std::vector<Tape::NodeId> terms;
    terms.push_back(tape.linear(node_embs, w_self));
    for (int r = 0; r < kRelationCount; ++r) {
        if (!frame.relation_present[r]) continue;
        if (r >= static_cast<int>(w_rel.size()) || w_rel[r] < 0) {
            throw ConfigError("mrgcn_layer: no weights for relation " + relation_name(r));
        }
        terms.push_back(tape.linear(tape.neighbor_mean(node_embs, frame.in_neighbors[r]), w_rel[r]));
    }
    return tape.add(terms);
}

namespace {

PoolResult select_top_k(Tape& tape, Tape::NodeId x_prop, const FrameTensors& frame, Tape::NodeId alpha,
                        double ratio) {
    const Tensor2& scores = tape.value(alpha);
    const int n = scores.rows;
    const int k = static_cast<int>(std::ceil(ratio * n));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores.at(a, 0) != scores.at(b, 0)) return scores.at(a, 0) > scores.at(b, 0);
        return a < b;  // tie: lower node index wins
    });

    PoolResult result;
    result.alpha = alpha;
    result.kept.assign(order.begin(), order.begin() + k);
    std::sort(result.kept.begin(), result.kept.end());

    std::vector<int> new_index(n, -1);
    for (std::size_t i = 0; i < result.kept.size(); ++i) new_index[result.kept[i]] = static_cast<int>(i);
    for (int r = 0; r < kRelationCount; ++r) {
        if (!frame.relation_present[r]) continue;
        const NeighborIndex& idx = frame.in_neighbors[r];
        for (int v = 0; v < n; ++v) {
            if (new_index[v] < 0) continue;
            for (int e = idx.offsets[v]; e < idx.offsets[v + 1]; ++e) {
                const int u = idx.sources[e];
                if (new_index[u] >= 0) {
                    result.induced_edges.push_back({new_index[u], new_index[v], r});
                }
            }
        }
    }

    const Tape::NodeId x_kept = tape.gather_rows(x_prop, result.kept);
    const Tape::NodeId alpha_kept = tape.gather_rows(alpha, result.kept);
    result.x_pool = tape.scale_rows(x_kept, alpha_kept);
    return result;
}

}  // namespace

PoolResult sag_pool(Tape& tape, Tape::NodeId x_prop, const FrameTensors& frame, Tape::NodeId w_self,
                    Tape::NodeId w_neigh, double ratio) {
    const Tape::NodeId score =
        tape.add({tape.linear(x_prop, w_self),
                  tape.linear(tape.neighbor_mean(x_prop, frame.union_in_neighbors), w_neigh)});
    return select_top_k(tape, x_prop, frame, tape.tanh(score), ratio);
}

PoolResult topk_pool(Tape& tape, Tape::NodeId x_prop, const FrameTensors& frame, Tape::NodeId w_proj,
                     double ratio) {
    return select_top_k(tape, x_prop, frame, tape.tanh(tape.linear(x_prop, w_proj)), ratio);
}

Tape::NodeId readout(Tape& tape, Tape::NodeId x_pool, ReadoutKind kind) {
    switch (kind) {
        case ReadoutKind::Add: return tape.reduce_rows(x_pool, Reduce::Sum);
        case ReadoutKind::Mean: return tape.reduce_rows(x_pool, Reduce::Mean);
        case ReadoutKind::Max: return tape.reduce_rows(x_pool, Reduce::Max);
    }
    throw ContractError("readout: bad kind");
}

LstmState lstm_zero_state(Tape& tape, int hidden) {
    return {tape.leaf(Tensor2(1, hidden)), tape.leaf(Tensor2(1, hidden))};
}

std::pair<Tape::NodeId, LstmState> lstm_step(Tape& tape, Tape::NodeId x, const LstmState& prev,
                                             const LstmWeights& w) {
    const int hidden = w.hidden;
    const Tensor2& hv = tape.value(prev.h);
    if (hv.cols != hidden) {
        throw DimensionError("lstm_step: state width " + hv.shape_str() + " vs hidden " + std::to_string(hidden));
    }
    const Tape::NodeId gates = tape.add({tape.linear(x, w.w_x, w.b), tape.linear(prev.h, w.w_h)});
    const Tape::NodeId i = tape.sigmoid(tape.slice_cols(gates, 0, hidden));
    const Tape::NodeId f = tape.sigmoid(tape.slice_cols(gates, hidden, 2 * hidden));
    const Tape::NodeId g = tape.tanh(tape.slice_cols(gates, 2 * hidden, 3 * hidden));
    const Tape::NodeId o = tape.sigmoid(tape.slice_cols(gates, 3 * hidden, 4 * hidden));
    const Tape::NodeId c = tape.add({tape.hadamard(f, prev.c), tape.hadamard(i, g)});
    const Tape::NodeId h = tape.hadamard(o, tape.tanh(c));
    return {h, LstmState{h, c}};
}

Tape::NodeId predict_frame(Tape& tape, Tape::NodeId z, Tape::NodeId mlp_w, Tape::NodeId mlp_b) {
    return tape.log_softmax_rows(tape.linear(z, mlp_w, mlp_b));
}

namespace {

Tensor2 dropout_mask(int rows, int cols, double rate, Rng& rng) {
    Tensor2 mask(rows, cols);
    const double scale = 1.0 / (1.0 - rate);
    for (double& v : mask.data) v = rng.uniform() < rate ? 0.0 : scale;
    return mask;
}

}  // namespace

ClipForwardResult clip_forward(Tape& tape, const TapedParams& params, const ClipGraphs& clip,
                               const ModelConfig& config, int vocab_size, RunMode mode, Rng* dropout_rng,
                               const ClassWeights* weights, bool with_loss) {
    config.validate();
    if (clip.frames.empty()) throw ContractError("clip_forward: empty clip " + clip.clip_id);
    const bool training = mode == RunMode::Train;
    if (training && config.dropout > 0.0 && dropout_rng == nullptr) {
        throw ContractError("clip_forward: train mode with dropout needs an rng");
    }

    std::vector<Tape::NodeId> rel_ids;
    std::vector<Tape::NodeId> self_ids;
    for (int l = 0; l < config.mrgcn_layers; ++l) {
        self_ids.push_back(params.at(self_param_name(l)));
    }
    if (config.spatial == SpatialKind::Mrgcn) {
        rel_ids.resize(static_cast<std::size_t>(config.mrgcn_layers) * kRelationCount);
        for (int l = 0; l < config.mrgcn_layers; ++l) {
            for (int r = 0; r < kRelationCount; ++r) {
                rel_ids[static_cast<std::size_t>(l) * kRelationCount + r] = params.at(rel_param_name(l, r));
            }
        }
    }

    LstmWeights lstm;
    if (config.temporal == TemporalKind::Lstm) {
        lstm = {params.at("lstm.w_x"), params.at("lstm.w_h"), params.at("lstm.b"), config.lstm_hidden};
    }
    const Tape::NodeId mlp_w = params.at("mlp.w");
    const Tape::NodeId mlp_b = params.at("mlp.b");

    // spatial stage: one graph embedding per frame
    std::vector<Tape::NodeId> graph_embs;
    graph_embs.reserve(clip.frames.size());
    for (const FrameTensors& frame : clip.frames) {
        if (frame.one_hot.cols != vocab_size) {
            throw DimensionError("clip_forward: one-hot width " + frame.one_hot.shape_str() + " vs vocabulary " +
                                 std::to_string(vocab_size));
        }
        Tape::NodeId h = tape.leaf(frame.one_hot);
        std::vector<Tape::NodeId> layer_outputs = {h};
        for (int l = 0; l < config.mrgcn_layers; ++l) {
            std::vector<Tape::NodeId> layer_rel;
            if (config.spatial == SpatialKind::Mrgcn) {
                layer_rel.assign(rel_ids.begin() + static_cast<std::ptrdiff_t>(l) * kRelationCount,
                                 rel_ids.begin() + static_cast<std::ptrdiff_t>(l + 1) * kRelationCount);
            }
            Tape::NodeId pre = config.spatial == SpatialKind::Mrgcn
                                   ? mrgcn_layer_preact(tape, h, frame, self_ids[l], layer_rel)
                                   : tape.linear(h, self_ids[l]);
            h = tape.relu(pre);
            if (training && config.dropout > 0.0) {
                const Tensor2& hv = tape.value(h);
                h = tape.mul_const(h, dropout_mask(hv.rows, hv.cols, config.dropout, *dropout_rng));
            }
            layer_outputs.push_back(h);
        }
        const Tape::NodeId x_prop = tape.concat_cols(layer_outputs);

        Tape::NodeId x_final = x_prop;
        if (config.pooling == PoolingKind::Sag) {
            x_final = sag_pool(tape, x_prop, frame, params.at("pool.self"), params.at("pool.neigh"),
                               config.pooling_ratio)
                          .x_pool;
        } else if (config.pooling == PoolingKind::TopK) {
            x_final = topk_pool(tape, x_prop, frame, params.at("pool.proj"), config.pooling_ratio).x_pool;
        }
        graph_embs.push_back(readout(tape, x_final, config.readout));
    }

    // temporal stage + head
    const int n_frames = static_cast<int>(clip.frames.size());
    std::vector<Tape::NodeId> z_nodes(n_frames, -1);
    if (config.temporal == TemporalKind::Lstm) {
        if (config.history.full) {
            LstmState state = lstm_zero_state(tape, config.lstm_hidden);
            for (int n = 0; n < n_frames; ++n) {
                auto [z, next] = lstm_step(tape, graph_embs[n], state, lstm);
                z_nodes[n] = z;
                state = next;
            }
        } else {
            // windowed history: each prediction sees a fresh state over the
            // last k frames only
            const int k = config.history.window;
            for (int n = 0; n < n_frames; ++n) {
                LstmState state = lstm_zero_state(tape, config.lstm_hidden);
                Tape::NodeId z = -1;
                for (int m = std::max(0, n - k + 1); m <= n; ++m) {
                    auto [zm, next] = lstm_step(tape, graph_embs[m], state, lstm);
                    z = zm;
                    state = next;
                }
                z_nodes[n] = z;
            }
        }
        if (training && config.dropout > 0.0) {
            for (int n = 0; n < n_frames; ++n) {
                z_nodes[n] = tape.mul_const(z_nodes[n],
                                            dropout_mask(1, config.lstm_hidden, config.dropout, *dropout_rng));
            }
        }
    } else {
        z_nodes = graph_embs;
    }

    ClipForwardResult result;
    result.trace.clip_id = clip.clip_id;
    result.trace.label = clip.label;
    std::vector<Tape::NodeId> loss_terms;
    for (int n = 0; n < n_frames; ++n) {
        const Tape::NodeId logp = predict_frame(tape, z_nodes[n], mlp_w, mlp_b);
        const Tensor2& lp = tape.value(logp);
        FramePrediction fp;
        fp.logp0 = lp.at(0, 0);
        fp.logp1 = lp.at(0, 1);
        fp.decision = fp.logp1 > fp.logp0 ? 1 : 0;
        result.trace.frames.push_back(fp);

        if (with_loss) {
            // per-frame label equals the clip label
            Tensor2 pick(1, 2);
            pick.at(0, clip.label) = 1.0;
            const Tape::NodeId nll = tape.scale(tape.sum_all(tape.mul_const(logp, std::move(pick))), -1.0);
            result.frame_losses.push_back(tape.value(nll).at(0, 0));
            double w = 1.0;
            if (weights) w = clip.label == 1 ? weights->w1 : weights->w0;
            loss_terms.push_back(w == 1.0 ? nll : tape.scale(nll, w));
        }
    }
    if (with_loss) {
        result.loss = tape.scale(tape.add(loss_terms), 1.0 / n_frames);
    }
    return result;
}

PredictionTrace predict_clip(const ParamStore& params, const ClipGraphs& clip, const ModelConfig& config,
                             int vocab_size) {
    Tape tape;
    const TapedParams taped = inject_params(tape, params);
    return clip_forward(tape, taped, clip, config, vocab_size, RunMode::Eval, nullptr, nullptr, false).trace;
}

}  // namespace sg2vec
