#pragma once

#include <optional>
#include <string>

namespace sg2vec {

enum class PoolingKind { None, Sag, TopK };
enum class ReadoutKind { Add, Mean, Max };
enum class TemporalKind { None, Lstm };
enum class SpatialKind { Mrgcn, Mlp };

struct HistoryMode {
    bool full = true;
    int window = 0;  // >= 1 when full == false

    static HistoryMode full_history() { return {true, 0}; }
    static HistoryMode windowed(int k);
    // accepts "full", "window5", "window:5"
    static HistoryMode parse(const std::string& text);
    std::string str() const;
};

struct ModelConfig {
    int mrgcn_layers = 2;
    int mrgcn_dim = 64;
    SpatialKind spatial = SpatialKind::Mrgcn;
    PoolingKind pooling = PoolingKind::Sag;
    double pooling_ratio = 0.25;
    ReadoutKind readout = ReadoutKind::Add;
    TemporalKind temporal = TemporalKind::Lstm;
    int lstm_hidden = 20;
    int mlp_out = 2;
    double dropout = 0.1;
    HistoryMode history = HistoryMode::full_history();

    void validate() const;  // throws ConfigError

    // width of the concatenated per-node embedding (one-hot + all layers)
    int concat_width(int vocab_size) const { return vocab_size + mrgcn_layers * mrgcn_dim; }
    // width of the vector feeding the MLP head
    int head_width(int vocab_size) const {
        return temporal == TemporalKind::Lstm ? lstm_hidden : concat_width(vocab_size);
    }
};

std::string to_string(PoolingKind k);
std::string to_string(ReadoutKind k);
std::string to_string(TemporalKind k);
std::string to_string(SpatialKind k);
PoolingKind pooling_from_string(const std::string& s);
ReadoutKind readout_from_string(const std::string& s);
TemporalKind temporal_from_string(const std::string& s);
SpatialKind spatial_from_string(const std::string& s);

}  // namespace sg2vec
