#include "mciseq/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mciseq/checkpoint.hpp"

namespace mciseq {

namespace {

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    Tensor t = Tensor::zeros(fan_in, fan_out);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : t.data) v = rng.uniform(-limit, limit);
    return t;
}

Tensor ones_row(std::size_t n) {
    Tensor t = Tensor::zeros(1, n);
    t.fill(1.0);
    return t;
}

}  // namespace

ModelParams ModelParams::init(const ScaConfig& sca_cfg, const MlpConfig& mlp_cfg,
                              std::uint64_t seed) {
    if (sca_cfg.heads < 1 || sca_cfg.model_dim < sca_cfg.heads)
        throw std::runtime_error("model: need model_dim >= heads >= 1");
    if (sca_cfg.dropout < 0.0 || sca_cfg.dropout >= 1.0)
        throw std::runtime_error("model: dropout must be in [0, 1)");
    if (mlp_cfg.out != 2) throw std::runtime_error("model: MLP output size must be 2");
    if (sca_cfg.layers != 1)
        throw std::runtime_error("model: only 1 encoder layer is supported");

    ModelParams mp;
    mp.sca_cfg = sca_cfg;
    mp.mlp_cfg = mlp_cfg;
    Rng rng = Rng::stream(seed, "init");

    const std::size_t d = sca_cfg.model_dim;
    const std::size_t dh = sca_cfg.head_dim();
    for (std::size_t h = 0; h < sca_cfg.heads; ++h) {
        const std::string p = "sca.h" + std::to_string(h) + ".";
        mp.sca.add(p + "wq", xavier_uniform(d, dh, rng));
        mp.sca.add(p + "bq", Tensor::zeros(1, dh));
        // no key bias: it shifts every score in a row by the same constant,
        // which cancels in the softmax, leaving a dead parameter
        mp.sca.add(p + "wk", xavier_uniform(d, dh, rng));
        mp.sca.add(p + "wv", xavier_uniform(d, dh, rng));
        mp.sca.add(p + "bv", Tensor::zeros(1, dh));
    }
    mp.sca.add("sca.wo", xavier_uniform(sca_cfg.heads * dh, d, rng));
    mp.sca.add("sca.bo", Tensor::zeros(1, d));
    mp.sca.add("sca.ln1.gain", ones_row(d));
    mp.sca.add("sca.ln1.bias", Tensor::zeros(1, d));
    mp.sca.add("sca.ffn.w1", xavier_uniform(d, sca_cfg.ffn_dim, rng));
    mp.sca.add("sca.ffn.b1", Tensor::zeros(1, sca_cfg.ffn_dim));
    mp.sca.add("sca.ffn.w2", xavier_uniform(sca_cfg.ffn_dim, d, rng));
    mp.sca.add("sca.ffn.b2", Tensor::zeros(1, d));
    mp.sca.add("sca.ln2.gain", ones_row(d));
    mp.sca.add("sca.ln2.bias", Tensor::zeros(1, d));

    mp.mlp.add("mlp.w1", xavier_uniform(d, mlp_cfg.hidden, rng));
    mp.mlp.add("mlp.b1", Tensor::zeros(1, mlp_cfg.hidden));
    mp.mlp.add("mlp.w2", xavier_uniform(mlp_cfg.hidden, mlp_cfg.out, rng));
    mp.mlp.add("mlp.b2", Tensor::zeros(1, mlp_cfg.out));
    return mp;
}

std::vector<Parameter*> ModelParams::all_params() {
    std::vector<Parameter*> out;
    for (auto& p : sca.items) out.push_back(p.get());
    for (auto& p : mlp.items) out.push_back(p.get());
    return out;
}

void ModelParams::save(const std::filesystem::path& path) const {
    save_param_sets(path, {&sca, &mlp});
}

void ModelParams::load(const std::filesystem::path& path) {
    load_param_sets(path, {&sca, &mlp});
}

Graph::NodeId sca_forward(Graph& g, Graph::NodeId x, const std::vector<bool>& pad_mask,
                          ModelParams& params, bool training, Rng* dropout_rng) {
    const ScaConfig& cfg = params.sca_cfg;
    const Tensor& X = g.val(x);
    if (X.cols() != cfg.model_dim) throw std::runtime_error("sca_forward: bad input width");
    if (pad_mask.size() != X.rows()) throw std::runtime_error("sca_forward: bad mask length");
    std::size_t n_real = 0;
    for (const bool b : pad_mask) n_real += b ? 1 : 0;
    if (n_real == 0) throw std::runtime_error("sca_forward: window has no real sentences");

    // key-padding: padded positions get a large negative score pre-softmax
    std::vector<double> key_bias(pad_mask.size(), 0.0);
    for (std::size_t i = 0; i < pad_mask.size(); ++i)
        if (!pad_mask[i]) key_bias[i] = -1e30;

    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(cfg.head_dim()));
    std::vector<Graph::NodeId> head_outputs;
    head_outputs.reserve(cfg.heads);
    for (std::size_t h = 0; h < cfg.heads; ++h) {
        const std::string p = "sca.h" + std::to_string(h) + ".";
        auto proj = [&](const char* w, const char* b) {
            return g.add_rowvec(g.matmul(x, g.param(*params.sca.find(p + w))),
                                g.param(*params.sca.find(p + b)));
        };
        const Graph::NodeId q = proj("wq", "bq");
        const Graph::NodeId k = g.matmul(x, g.param(*params.sca.find(p + "wk")));
        const Graph::NodeId v = proj("wv", "bv");
        Graph::NodeId scores = g.scale(g.matmul_nt(q, k), inv_sqrt_dh);
        Graph::NodeId attn = g.softmax_rows(scores, &key_bias);
        attn = g.dropout(attn, cfg.dropout, training, dropout_rng);
        head_outputs.push_back(g.matmul(attn, v));
    }
    Graph::NodeId heads = cfg.heads == 1 ? head_outputs[0] : g.concat_cols(head_outputs);
    Graph::NodeId attn_out =
        g.add_rowvec(g.matmul(heads, g.param(*params.sca.find("sca.wo"))),
                     g.param(*params.sca.find("sca.bo")));
    attn_out = g.dropout(attn_out, cfg.dropout, training, dropout_rng);
    Graph::NodeId y = g.layer_norm_rows(g.add(x, attn_out),
                                        g.param(*params.sca.find("sca.ln1.gain")),
                                        g.param(*params.sca.find("sca.ln1.bias")));

    Graph::NodeId ffn = g.relu(g.add_rowvec(g.matmul(y, g.param(*params.sca.find("sca.ffn.w1"))),
                                            g.param(*params.sca.find("sca.ffn.b1"))));
    ffn = g.add_rowvec(g.matmul(ffn, g.param(*params.sca.find("sca.ffn.w2"))),
                       g.param(*params.sca.find("sca.ffn.b2")));
    ffn = g.dropout(ffn, cfg.dropout, training, dropout_rng);
    Graph::NodeId z = g.layer_norm_rows(g.add(y, ffn),
                                        g.param(*params.sca.find("sca.ln2.gain")),
                                        g.param(*params.sca.find("sca.ln2.bias")));

    return g.sigmoid(g.mean_pool_rows(z, pad_mask));
}

Graph::NodeId mlp_forward(Graph& g, Graph::NodeId temporal, ModelParams& params,
                          bool training, Rng* dropout_rng) {
    (void)training;
    (void)dropout_rng;
    Graph::NodeId h = g.relu(g.add_rowvec(g.matmul(temporal, g.param(*params.mlp.find("mlp.w1"))),
                                          g.param(*params.mlp.find("mlp.b1"))));
    Graph::NodeId logits = g.add_rowvec(g.matmul(h, g.param(*params.mlp.find("mlp.w2"))),
                                        g.param(*params.mlp.find("mlp.b2")));
    return g.softmax_rows(logits);
}

std::array<double, 2> predict_sequence(const Tensor& window, const std::vector<bool>& pad_mask,
                                       ModelParams& params) {
    Graph g;
    const Graph::NodeId x = g.constant(window);
    const Graph::NodeId t = sca_forward(g, x, pad_mask, params, /*training=*/false, nullptr);
    const Graph::NodeId probs = mlp_forward(g, t, params, /*training=*/false, nullptr);
    const Tensor& P = g.val(probs);
    return {P.data[0], P.data[1]};
}

Tensor window_matrix(const SentenceSequence& seq, const EmbedderBackend& backend,
                     std::size_t gamma) {
    Tensor w = Tensor::zeros(gamma, backend.model_dim());
    if (seq.real_length() > gamma) throw std::runtime_error("window_matrix: sequence longer than gamma");
    for (std::size_t i = 0; i < seq.real_length(); ++i) {
        const std::vector<double> v = backend.sentential(seq.sentences[i]);
        for (std::size_t j = 0; j < v.size(); ++j) w(i, j) = v[j];
    }
    return w;
}

}  // namespace mciseq
