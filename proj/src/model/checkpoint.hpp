#pragma once

#include <string>

#include "core/params.hpp"
#include "graph/extraction.hpp"
#include "model/config.hpp"

namespace sg2vec {

// Versioned model container: magic + JSON header (config echo, vocabulary,
// extraction settings, shape manifest) + raw little-endian doubles in header
// order. Serialization is canonical: identical params produce identical
// bytes.
struct Checkpoint {
    ModelConfig model;
    ExtractionConfig extraction;
    ParamStore params;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);

    std::string info_json() const;
};

}  // namespace sg2vec
