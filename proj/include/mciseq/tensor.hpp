#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mciseq/rng.hpp"

namespace mciseq {

// Raised when any op produces a NaN or infinity.
struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major tensor, 64-bit floats. Everything in the model is 2-D
// (scalars are 1x1), but the shape is kept general for the checkpoint format.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    static Tensor zeros(std::size_t r, std::size_t c) {
        Tensor t;
        t.shape = {r, c};
        t.data.assign(r * c, 0.0);
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t = zeros(1, 1);
        t.data[0] = v;
        return t;
    }

    static Tensor row(std::vector<double> v) {
        Tensor t;
        t.shape = {1, v.size()};
        t.data = std::move(v);
        return t;
    }

    std::size_t size() const { return data.size(); }
    std::size_t rows() const { return shape[0]; }
    std::size_t cols() const { return shape[1]; }

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
    void fill(double v) { data.assign(data.size(), v); }
};

// Trainable tensor with an accumulating gradient buffer.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter(std::string n, Tensor init) : name(std::move(n)), value(std::move(init)) {
        grad = Tensor::zeros(value.rows(), value.cols());
    }

    void zero_grad() { grad.fill(0.0); }
};

// Ordered, uniquely named parameter collection. Order fixes both the
// optimizer-state alignment and the checkpoint layout.
struct ParamSet {
    std::vector<std::unique_ptr<Parameter>> items;

    Parameter& add(std::string name, Tensor init);
    Parameter* find(std::string_view name);
    const Parameter* find(std::string_view name) const;
    void zero_grads() {
        for (auto& p : items) p->zero_grad();
    }
    std::size_t total_coords() const;
};

// Reverse-mode tape. Build a fresh Graph per forward pass; backward() walks
// the tape in reverse and adds parameter gradients into Parameter::grad, so
// repeated passes accumulate (batch semantics).
class Graph {
public:
    using NodeId = std::size_t;

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    NodeId constant(Tensor t);
    NodeId param(Parameter& p);

    const Tensor& val(NodeId id) const { return *nodes_[id].value; }
    Tensor& grad(NodeId id) { return nodes_[id].grad; }

    NodeId matmul(NodeId a, NodeId b);     // A(mxk) @ B(kxn)
    NodeId matmul_nt(NodeId a, NodeId b);  // A(mxk) @ B(nxk)^T
    NodeId add(NodeId a, NodeId b);
    NodeId add_rowvec(NodeId a, NodeId bias);  // bias is 1 x cols(a)
    NodeId scale(NodeId a, double s);
    NodeId relu(NodeId a);
    NodeId sigmoid(NodeId a);
    // Row-wise softmax. `key_bias`, when given, is added to every row before
    // normalization (large negative entries implement key-padding masks).
    NodeId softmax_rows(NodeId a, const std::vector<double>* key_bias = nullptr);
    NodeId layer_norm_rows(NodeId a, NodeId gain, NodeId bias, double eps = 1e-5);
    // Inverted dropout: scales kept activations by 1/keep at train time so
    // evaluation is the identity. training=false returns `a` unchanged.
    NodeId dropout(NodeId a, double rate, bool training, Rng* rng);
    // Masked mean over rows; only rows with mask=true contribute. Output 1 x c.
    NodeId mean_pool_rows(NodeId a, const std::vector<bool>& row_mask);
    NodeId concat_cols(const std::vector<NodeId>& parts);
    NodeId sum(NodeId a);  // scalar sum of all entries

    // KL(target || predicted) for a 1x2 probability row, in nats.
    NodeId kld_to_target(NodeId probs, std::array<double, 2> target);
    // Negative log-likelihood of the hard label (cross entropy).
    NodeId nll(NodeId probs, int label_index);

    void backward(NodeId loss);

private:
    struct Node {
        Tensor owned;
        const Tensor* value = nullptr;
        Tensor grad;
        Parameter* parameter = nullptr;
        std::function<void()> back;
    };

    NodeId make(Tensor value, std::function<void()> back);
    void check_finite(NodeId id, const char* op) const;

    std::deque<Node> nodes_;
};

// Central finite differences against the tape gradients. `f(with_grad)` must
// rebuild the computation from current parameter values and, when with_grad,
// run backward so gradients land in the parameters. Returns the max relative
// error over all checked coordinates. `max_coords` > 0 samples that many
// coordinates per parameter instead of sweeping all of them.
double grad_check(const std::function<double(bool)>& f,
                  const std::vector<Parameter*>& params,
                  double epsilon = 1e-5,
                  std::size_t max_coords = 0,
                  Rng* coord_sampler = nullptr);

}  // namespace mciseq
