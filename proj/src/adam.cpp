#include "mciseq/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace mciseq {

Adam::Adam(const ParamSet& params, AdamConfig cfg) : cfg_(cfg) {
    m_.reserve(params.items.size());
    v_.reserve(params.items.size());
    for (const auto& p : params.items) {
        m_.push_back(Tensor::zeros(p->value.rows(), p->value.cols()));
        v_.push_back(Tensor::zeros(p->value.rows(), p->value.cols()));
    }
}

void Adam::step(ParamSet& params, double lr_multiplier, double grad_scale) {
    if (params.items.size() != m_.size())
        throw std::runtime_error("adam: parameter set does not match optimizer state");
    ++t_;
    const double lr_t = cfg_.lr * lr_multiplier / (1.0 + cfg_.decay * static_cast<double>(t_));
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.items.size(); ++i) {
        Parameter& p = *params.items[i];
        if (!p.value.same_shape(m_[i]))
            throw std::runtime_error("adam: shape mismatch for " + p.name);
        for (std::size_t j = 0; j < p.value.size(); ++j) {
            const double g = p.grad.data[j] * grad_scale;
            m_[i].data[j] = cfg_.beta1 * m_[i].data[j] + (1.0 - cfg_.beta1) * g;
            v_[i].data[j] = cfg_.beta2 * v_[i].data[j] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m_[i].data[j] / bc1;
            const double vhat = v_[i].data[j] / bc2;
            p.value.data[j] -= lr_t * mhat / (std::sqrt(vhat) + cfg_.epsilon);
        }
    }
}

}  // namespace mciseq
