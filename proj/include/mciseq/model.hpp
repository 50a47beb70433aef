#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mciseq/corpus.hpp"
#include "mciseq/embedder.hpp"
#include "mciseq/tensor.hpp"

namespace mciseq {

// 1-layer transformer encoder over a window of sentential vectors. There is
// deliberately no positional embedding anywhere in the module. model_dim is
// not required to be divisible by heads: attention projects each head to
// floor(model_dim / heads) dimensions and the output projection maps the
// concatenated heads back to model_dim.
struct ScaConfig {
    std::size_t model_dim = 769;
    std::size_t heads = 8;
    std::size_t ffn_dim = 128;
    double dropout = 0.3;
    std::size_t layers = 1;
    std::size_t gamma = 200;

    std::size_t head_dim() const { return model_dim / heads; }
};

struct MlpConfig {
    std::size_t hidden = 384;
    std::size_t out = 2;
};

struct ModelParams {
    ScaConfig sca_cfg;
    MlpConfig mlp_cfg;
    ParamSet sca;
    ParamSet mlp;

    static ModelParams init(const ScaConfig& sca_cfg, const MlpConfig& mlp_cfg,
                            std::uint64_t seed);

    std::vector<Parameter*> all_params();
    void zero_grads() {
        sca.zero_grads();
        mlp.zero_grads();
    }

    void save(const std::filesystem::path& path) const;
    void load(const std::filesystem::path& path);
};

// Encoder layer + masked mean pooling + sigmoid. `x` is a gamma x model_dim
// node (padded rows zero); returns the 1 x model_dim temporal vector node.
Graph::NodeId sca_forward(Graph& g, Graph::NodeId x, const std::vector<bool>& pad_mask,
                          ModelParams& params, bool training, Rng* dropout_rng);

// Two dense layers with softmax; returns the 1 x 2 probability node.
Graph::NodeId mlp_forward(Graph& g, Graph::NodeId temporal, ModelParams& params,
                          bool training, Rng* dropout_rng);

// Eval-mode composition (dropout off). Returns {p_mci, p_nc}.
std::array<double, 2> predict_sequence(const Tensor& window, const std::vector<bool>& pad_mask,
                                       ModelParams& params);

// gamma x (dim+1) input matrix for one sequence; padded rows stay zero.
Tensor window_matrix(const SentenceSequence& seq, const EmbedderBackend& backend,
                     std::size_t gamma);

}  // namespace mciseq
