#include "model/config.hpp"

#include <regex>

#include "util/errors.hpp"

namespace sg2vec {

HistoryMode HistoryMode::windowed(int k) {
    if (k < 1) throw ConfigError("history window must be >= 1, got " + std::to_string(k));
    return {false, k};
}

HistoryMode HistoryMode::parse(const std::string& text) {
    if (text == "full") return full_history();
    static const std::regex window_re("^window:?([0-9]+)$");
    std::smatch m;
    if (std::regex_match(text, m, window_re)) {
        return windowed(std::stoi(m[1].str()));
    }
    throw ConfigError("bad history mode '" + text + "' (expected 'full' or 'windowK')");
}

std::string HistoryMode::str() const {
    return full ? "full" : "window" + std::to_string(window);
}

void ModelConfig::validate() const {
    if (mrgcn_layers < 1) throw ConfigError("mrgcn_layers must be >= 1");
    if (mrgcn_dim < 1) throw ConfigError("mrgcn_dim must be >= 1");
    if (!(pooling_ratio > 0.0 && pooling_ratio <= 1.0)) {
        throw ConfigError("pooling_ratio must be in (0, 1], got " + std::to_string(pooling_ratio));
    }
    if (temporal == TemporalKind::Lstm && lstm_hidden < 1) throw ConfigError("lstm_hidden must be >= 1");
    if (mlp_out != 2) throw ConfigError("mlp_out must be 2 (binary collision prediction)");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
    if (!history.full && history.window < 1) throw ConfigError("history window must be >= 1");
}

std::string to_string(PoolingKind k) {
    switch (k) {
        case PoolingKind::None: return "none";
        case PoolingKind::Sag: return "sag";
        case PoolingKind::TopK: return "topk";
    }
    return "?";
}

std::string to_string(ReadoutKind k) {
    switch (k) {
        case ReadoutKind::Add: return "add";
        case ReadoutKind::Mean: return "mean";
        case ReadoutKind::Max: return "max";
    }
    return "?";
}

std::string to_string(TemporalKind k) {
    return k == TemporalKind::Lstm ? "lstm" : "none";
}

std::string to_string(SpatialKind k) {
    return k == SpatialKind::Mrgcn ? "mrgcn" : "mlp";
}

PoolingKind pooling_from_string(const std::string& s) {
    if (s == "none") return PoolingKind::None;
    if (s == "sag") return PoolingKind::Sag;
    if (s == "topk") return PoolingKind::TopK;
    throw ConfigError("bad pooling '" + s + "' (none|sag|topk)");
}

ReadoutKind readout_from_string(const std::string& s) {
    if (s == "add") return ReadoutKind::Add;
    if (s == "mean") return ReadoutKind::Mean;
    if (s == "max") return ReadoutKind::Max;
    throw ConfigError("bad readout '" + s + "' (add|mean|max)");
}

TemporalKind temporal_from_string(const std::string& s) {
    if (s == "none") return TemporalKind::None;
    if (s == "lstm") return TemporalKind::Lstm;
    throw ConfigError("bad temporal '" + s + "' (none|lstm)");
}

SpatialKind spatial_from_string(const std::string& s) {
    if (s == "mrgcn") return SpatialKind::Mrgcn;
    if (s == "mlp") return SpatialKind::Mlp;
    throw ConfigError("bad spatial '" + s + "' (mrgcn|mlp)");
}

}  // namespace sg2vec
