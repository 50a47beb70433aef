#pragma once

#include <cstdint>
#include <vector>

#include "mciseq/tensor.hpp"

namespace mciseq {

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    // Inverse-time learning-rate decay: lr_t = lr / (1 + decay * t).
    double decay = 1e-7;
    double epsilon = 1e-7;
};

// Bias-corrected Adam over one ParamSet. Moment buffers are aligned with the
// set's parameter order and never reallocated, so step() is allocation-free.
class Adam {
public:
    Adam(const ParamSet& params, AdamConfig cfg);

    // One update from the gradients currently accumulated in the parameters.
    // `lr_multiplier` is the warm-up factor; `grad_scale` is applied to every
    // gradient first (1/batch_size turns accumulated sums into means).
    void step(ParamSet& params, double lr_multiplier = 1.0, double grad_scale = 1.0);

    std::uint64_t steps() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::uint64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace mciseq
