#include "mciseq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mciseq/kernels.hpp"

namespace mciseq {

bool Tensor::all_finite() const {
    for (const double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

Parameter& ParamSet::add(std::string name, Tensor init) {
    if (find(name) != nullptr) throw std::runtime_error("duplicate parameter name: " + name);
    items.push_back(std::make_unique<Parameter>(std::move(name), std::move(init)));
    return *items.back();
}

Parameter* ParamSet::find(std::string_view name) {
    for (auto& p : items)
        if (p->name == name) return p.get();
    return nullptr;
}

const Parameter* ParamSet::find(std::string_view name) const {
    for (auto& p : items)
        if (p->name == name) return p.get();
    return nullptr;
}

std::size_t ParamSet::total_coords() const {
    std::size_t n = 0;
    for (auto& p : items) n += p->value.size();
    return n;
}

Graph::NodeId Graph::make(Tensor value, std::function<void()> back) {
    Node n;
    n.owned = std::move(value);
    n.value = &n.owned;
    n.grad = Tensor::zeros(n.owned.rows(), n.owned.cols());
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    // deque never relocates elements, so fix up the self-pointer after the move
    nodes_.back().value = &nodes_.back().owned;
    return nodes_.size() - 1;
}

void Graph::check_finite(NodeId id, const char* op) const {
    if (!nodes_[id].value->all_finite())
        throw NonFiniteError(std::string("non-finite value produced by ") + op);
}

Graph::NodeId Graph::constant(Tensor t) {
    const NodeId id = make(std::move(t), nullptr);
    check_finite(id, "constant");
    return id;
}

Graph::NodeId Graph::param(Parameter& p) {
    Node n;
    n.value = &p.value;
    n.grad = Tensor::zeros(p.value.rows(), p.value.cols());
    n.parameter = &p;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

Graph::NodeId Graph::matmul(NodeId a, NodeId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (A.cols() != B.rows()) throw std::runtime_error("matmul: shape mismatch");
    Tensor C = Tensor::zeros(A.rows(), B.cols());
    kernels::matmul_nn(A.data.data(), B.data.data(), C.data.data(), A.rows(), A.cols(), B.cols());
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, b] {
        const Tensor& dC = nodes_[id].grad;
        const Tensor& A2 = val(a);
        const Tensor& B2 = val(b);
        Tensor dA = Tensor::zeros(A2.rows(), A2.cols());
        kernels::matmul_nt(dC.data.data(), B2.data.data(), dA.data.data(), dC.rows(), dC.cols(), B2.rows());
        Tensor dB = Tensor::zeros(B2.rows(), B2.cols());
        kernels::matmul_tn(A2.data.data(), dC.data.data(), dB.data.data(), A2.cols(), A2.rows(), dC.cols());
        Tensor& ga = grad(a);
        Tensor& gb = grad(b);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data[i] += dA.data[i];
        for (std::size_t i = 0; i < gb.size(); ++i) gb.data[i] += dB.data[i];
    };
    check_finite(id, "matmul");
    return id;
}

Graph::NodeId Graph::matmul_nt(NodeId a, NodeId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (A.cols() != B.cols()) throw std::runtime_error("matmul_nt: shape mismatch");
    Tensor C = Tensor::zeros(A.rows(), B.rows());
    kernels::matmul_nt(A.data.data(), B.data.data(), C.data.data(), A.rows(), A.cols(), B.rows());
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, b] {
        const Tensor& dC = nodes_[id].grad;  // m x n
        const Tensor& A2 = val(a);           // m x k
        const Tensor& B2 = val(b);           // n x k
        Tensor dA = Tensor::zeros(A2.rows(), A2.cols());
        kernels::matmul_nn(dC.data.data(), B2.data.data(), dA.data.data(), dC.rows(), dC.cols(), B2.cols());
        Tensor dB = Tensor::zeros(B2.rows(), B2.cols());
        kernels::matmul_tn(dC.data.data(), A2.data.data(), dB.data.data(), dC.cols(), dC.rows(), A2.cols());
        Tensor& ga = grad(a);
        Tensor& gb = grad(b);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data[i] += dA.data[i];
        for (std::size_t i = 0; i < gb.size(); ++i) gb.data[i] += dB.data[i];
    };
    check_finite(id, "matmul_nt");
    return id;
}

Graph::NodeId Graph::add(NodeId a, NodeId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) throw std::runtime_error("add: shape mismatch");
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C.data[i] += B.data[i];
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, b] {
        const Tensor& d = nodes_[id].grad;
        Tensor& ga = grad(a);
        Tensor& gb = grad(b);
        for (std::size_t i = 0; i < d.size(); ++i) {
            ga.data[i] += d.data[i];
            gb.data[i] += d.data[i];
        }
    };
    check_finite(id, "add");
    return id;
}

Graph::NodeId Graph::add_rowvec(NodeId a, NodeId bias) {
    const Tensor& A = val(a);
    const Tensor& B = val(bias);
    if (B.rows() != 1 || B.cols() != A.cols()) throw std::runtime_error("add_rowvec: shape mismatch");
    Tensor C = A;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) += B.data[j];
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, bias] {
        const Tensor& d = nodes_[id].grad;
        Tensor& ga = grad(a);
        Tensor& gb = grad(bias);
        for (std::size_t i = 0; i < d.size(); ++i) ga.data[i] += d.data[i];
        for (std::size_t j = 0; j < d.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < d.rows(); ++i) s += d(i, j);
            gb.data[j] += s;
        }
    };
    check_finite(id, "add_rowvec");
    return id;
}

Graph::NodeId Graph::scale(NodeId a, double s) {
    Tensor C = val(a);
    for (double& v : C.data) v *= s;
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, s] {
        const Tensor& d = nodes_[id].grad;
        Tensor& ga = grad(a);
        for (std::size_t i = 0; i < d.size(); ++i) ga.data[i] += s * d.data[i];
    };
    check_finite(id, "scale");
    return id;
}

Graph::NodeId Graph::relu(NodeId a) {
    Tensor C = val(a);
    for (double& v : C.data) v = v > 0.0 ? v : 0.0;
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a] {
        const Tensor& d = nodes_[id].grad;
        const Tensor& x = val(a);
        Tensor& ga = grad(a);
        for (std::size_t i = 0; i < d.size(); ++i)
            if (x.data[i] > 0.0) ga.data[i] += d.data[i];
    };
    check_finite(id, "relu");
    return id;
}

Graph::NodeId Graph::sigmoid(NodeId a) {
    Tensor C = val(a);
    for (double& v : C.data) v = 1.0 / (1.0 + std::exp(-v));
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a] {
        const Tensor& d = nodes_[id].grad;
        const Tensor& y = *nodes_[id].value;
        Tensor& ga = grad(a);
        for (std::size_t i = 0; i < d.size(); ++i)
            ga.data[i] += d.data[i] * y.data[i] * (1.0 - y.data[i]);
    };
    check_finite(id, "sigmoid");
    return id;
}

Graph::NodeId Graph::softmax_rows(NodeId a, const std::vector<double>* key_bias) {
    const Tensor& A = val(a);
    if (key_bias && key_bias->size() != A.cols())
        throw std::runtime_error("softmax_rows: bias length mismatch");
    Tensor C = A;
    for (std::size_t i = 0; i < C.rows(); ++i) {
        double mx = -1e300;
        for (std::size_t j = 0; j < C.cols(); ++j) {
            if (key_bias) C(i, j) += (*key_bias)[j];
            mx = std::max(mx, C(i, j));
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < C.cols(); ++j) {
            C(i, j) = std::exp(C(i, j) - mx);
            denom += C(i, j);
        }
        for (std::size_t j = 0; j < C.cols(); ++j) C(i, j) /= denom;
    }
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a] {
        const Tensor& d = nodes_[id].grad;
        const Tensor& y = *nodes_[id].value;
        Tensor& ga = grad(a);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < d.cols(); ++j) dot += d(i, j) * y(i, j);
            for (std::size_t j = 0; j < d.cols(); ++j)
                ga(i, j) += y(i, j) * (d(i, j) - dot);
        }
    };
    check_finite(id, "softmax_rows");
    return id;
}

Graph::NodeId Graph::layer_norm_rows(NodeId a, NodeId gain, NodeId bias, double eps) {
    const Tensor& A = val(a);
    const Tensor& G = val(gain);
    const Tensor& B = val(bias);
    const std::size_t c = A.cols();
    if (G.cols() != c || B.cols() != c || G.rows() != 1 || B.rows() != 1)
        throw std::runtime_error("layer_norm_rows: shape mismatch");
    Tensor C = Tensor::zeros(A.rows(), c);
    std::vector<double> mu(A.rows()), inv_sd(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double m = 0.0;
        for (std::size_t j = 0; j < c; ++j) m += A(i, j);
        m /= static_cast<double>(c);
        double var = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            const double t = A(i, j) - m;
            var += t * t;
        }
        var /= static_cast<double>(c);
        mu[i] = m;
        inv_sd[i] = 1.0 / std::sqrt(var + eps);
        for (std::size_t j = 0; j < c; ++j)
            C(i, j) = (A(i, j) - m) * inv_sd[i] * G.data[j] + B.data[j];
    }
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, gain, bias, mu, inv_sd] {
        const Tensor& d = nodes_[id].grad;
        const Tensor& x = val(a);
        const Tensor& g = val(gain);
        Tensor& ga = grad(a);
        Tensor& gg = grad(gain);
        Tensor& gb = grad(bias);
        const std::size_t c = x.cols();
        const double cn = static_cast<double>(c);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            // dxhat, then the two row-level reductions of the layer-norm chain
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (std::size_t j = 0; j < c; ++j) {
                const double xhat = (x(i, j) - mu[i]) * inv_sd[i];
                const double dxhat = d(i, j) * g.data[j];
                sum_dxhat += dxhat;
                sum_dxhat_xhat += dxhat * xhat;
                gg.data[j] += d(i, j) * xhat;
                gb.data[j] += d(i, j);
            }
            for (std::size_t j = 0; j < c; ++j) {
                const double xhat = (x(i, j) - mu[i]) * inv_sd[i];
                const double dxhat = d(i, j) * g.data[j];
                ga(i, j) += inv_sd[i] * (dxhat - sum_dxhat / cn - xhat * sum_dxhat_xhat / cn);
            }
        }
    };
    check_finite(id, "layer_norm_rows");
    return id;
}

Graph::NodeId Graph::dropout(NodeId a, double rate, bool training, Rng* rng) {
    if (!training || rate <= 0.0) return a;
    if (rate >= 1.0) throw std::runtime_error("dropout: rate must be < 1");
    if (rng == nullptr) throw std::runtime_error("dropout: rng required in training mode");
    const Tensor& A = val(a);
    const double keep = 1.0 - rate;
    std::vector<double> mask(A.size());
    for (double& m : mask) m = rng->uniform() >= rate ? 1.0 / keep : 0.0;
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C.data[i] *= mask[i];
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, mask = std::move(mask)] {
        const Tensor& d = nodes_[id].grad;
        Tensor& ga = grad(a);
        for (std::size_t i = 0; i < d.size(); ++i) ga.data[i] += d.data[i] * mask[i];
    };
    check_finite(id, "dropout");
    return id;
}

Graph::NodeId Graph::mean_pool_rows(NodeId a, const std::vector<bool>& row_mask) {
    const Tensor& A = val(a);
    if (row_mask.size() != A.rows()) throw std::runtime_error("mean_pool_rows: mask length mismatch");
    std::size_t n_real = 0;
    for (const bool b : row_mask) n_real += b ? 1 : 0;
    if (n_real == 0) throw std::runtime_error("mean_pool_rows: all rows masked out");
    Tensor C = Tensor::zeros(1, A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        if (!row_mask[i]) continue;
        for (std::size_t j = 0; j < A.cols(); ++j) C.data[j] += A(i, j);
    }
    for (double& v : C.data) v /= static_cast<double>(n_real);
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, a, row_mask, n_real] {
        const Tensor& d = nodes_[id].grad;
        Tensor& ga = grad(a);
        const double inv = 1.0 / static_cast<double>(n_real);
        for (std::size_t i = 0; i < ga.rows(); ++i) {
            if (!row_mask[i]) continue;
            for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += d.data[j] * inv;
        }
    };
    check_finite(id, "mean_pool_rows");
    return id;
}

Graph::NodeId Graph::concat_cols(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw std::runtime_error("concat_cols: empty input");
    const std::size_t r = val(parts[0]).rows();
    std::size_t total = 0;
    for (const NodeId p : parts) {
        if (val(p).rows() != r) throw std::runtime_error("concat_cols: row mismatch");
        total += val(p).cols();
    }
    Tensor C = Tensor::zeros(r, total);
    std::size_t off = 0;
    for (const NodeId p : parts) {
        const Tensor& P = val(p);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < P.cols(); ++j) C(i, off + j) = P(i, j);
        off += P.cols();
    }
    const NodeId id = make(std::move(C), nullptr);
    nodes_[id].back = [this, id, parts] {
        const Tensor& d = nodes_[id].grad;
        std::size_t off = 0;
        for (const NodeId p : parts) {
            Tensor& gp = grad(p);
            for (std::size_t i = 0; i < gp.rows(); ++i)
                for (std::size_t j = 0; j < gp.cols(); ++j) gp(i, j) += d(i, off + j);
            off += gp.cols();
        }
    };
    check_finite(id, "concat_cols");
    return id;
}

Graph::NodeId Graph::sum(NodeId a) {
    const Tensor& A = val(a);
    double s = 0.0;
    for (const double v : A.data) s += v;
    const NodeId id = make(Tensor::scalar(s), nullptr);
    nodes_[id].back = [this, id, a] {
        const double d = nodes_[id].grad.data[0];
        Tensor& ga = grad(a);
        for (double& v : ga.data) v += d;
    };
    check_finite(id, "sum");
    return id;
}

namespace {
constexpr double kProbClamp = 1e-12;
double clamp_prob(double q) {
    return std::min(std::max(q, kProbClamp), 1.0 - kProbClamp);
}
}  // namespace

Graph::NodeId Graph::kld_to_target(NodeId probs, std::array<double, 2> target) {
    const Tensor& Q = val(probs);
    if (Q.rows() != 1 || Q.cols() != 2) throw std::runtime_error("kld_to_target: expected 1x2 probabilities");
    double loss = 0.0;
    for (int i = 0; i < 2; ++i) {
        if (target[i] <= 0.0) continue;
        loss += target[i] * (std::log(target[i]) - std::log(clamp_prob(Q.data[i])));
    }
    const NodeId id = make(Tensor::scalar(loss), nullptr);
    nodes_[id].back = [this, id, probs, target] {
        const double d = nodes_[id].grad.data[0];
        const Tensor& q = val(probs);
        Tensor& gq = grad(probs);
        for (int i = 0; i < 2; ++i) {
            if (target[i] <= 0.0) continue;
            gq.data[i] += d * (-target[i] / clamp_prob(q.data[i]));
        }
    };
    check_finite(id, "kld_to_target");
    return id;
}

Graph::NodeId Graph::nll(NodeId probs, int label_index) {
    const Tensor& Q = val(probs);
    if (Q.rows() != 1 || Q.cols() != 2) throw std::runtime_error("nll: expected 1x2 probabilities");
    if (label_index < 0 || label_index > 1) throw std::runtime_error("nll: bad label index");
    const double loss = -std::log(clamp_prob(Q.data[label_index]));
    const NodeId id = make(Tensor::scalar(loss), nullptr);
    nodes_[id].back = [this, id, probs, label_index] {
        const double d = nodes_[id].grad.data[0];
        const Tensor& q = val(probs);
        Tensor& gq = grad(probs);
        gq.data[label_index] += d * (-1.0 / clamp_prob(q.data[label_index]));
    };
    check_finite(id, "nll");
    return id;
}

void Graph::backward(NodeId loss) {
    const Tensor& L = *nodes_[loss].value;
    if (L.size() != 1) throw std::runtime_error("backward: loss must be scalar");
    nodes_[loss].grad.data[0] = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        Node& n = nodes_[i];
        if (n.back) n.back();
        if (n.parameter != nullptr) {
            Tensor& pg = n.parameter->grad;
            for (std::size_t j = 0; j < pg.size(); ++j) pg.data[j] += n.grad.data[j];
        }
    }
}

double grad_check(const std::function<double(bool)>& f,
                  const std::vector<Parameter*>& params,
                  double epsilon,
                  std::size_t max_coords,
                  Rng* coord_sampler) {
    for (Parameter* p : params) p->zero_grad();
    f(true);
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) analytic.push_back(p->grad);

    double max_rel = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        std::vector<std::size_t> coords;
        if (max_coords == 0 || max_coords >= p.value.size()) {
            coords.resize(p.value.size());
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
        } else {
            Rng fallback(0x9e3779b9);
            Rng& r = coord_sampler ? *coord_sampler : fallback;
            for (std::size_t i = 0; i < max_coords; ++i)
                coords.push_back(static_cast<std::size_t>(r.uniform_int(p.value.size())));
        }
        for (const std::size_t ci : coords) {
            const double saved = p.value.data[ci];
            p.value.data[ci] = saved + epsilon;
            const double lp = f(false);
            p.value.data[ci] = saved - epsilon;
            const double lm = f(false);
            p.value.data[ci] = saved;
            const double fd = (lp - lm) / (2.0 * epsilon);
            const double ad = analytic[pi].data[ci];
            const double rel = std::abs(ad - fd) / std::max(1e-8, std::abs(ad) + std::abs(fd));
            max_rel = std::max(max_rel, rel);
        }
    }
    // restore the analytic gradients (f(true) above accumulated them once)
    for (std::size_t pi = 0; pi < params.size(); ++pi) params[pi]->grad = analytic[pi];
    return max_rel;
}

}  // namespace mciseq
