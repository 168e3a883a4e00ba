#include "vsp/convnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vsp/errors.hpp"
#include "vsp/linear_model.hpp"
#include "vsp/random.hpp"

namespace vsp {

TokenSequence embed_sequence(const std::vector<std::string>& tokens, const VectorStore& store,
                             std::size_t max_len) {
    TokenSequence seq;
    seq.dim = store.dim();
    for (const auto& t : tokens) {
        if (seq.length == max_len) break;
        auto vec = store.lookup(t);
        if (vec.empty()) continue;
        seq.data.insert(seq.data.end(), vec.begin(), vec.end());
        ++seq.length;
    }
    return seq;
}

ConvNetModel::ConvNetModel(std::size_t dim, std::vector<std::size_t> widths, std::size_t maps)
    : dim_(dim), widths_(std::move(widths)), maps_(maps) {
    std::size_t offset = 0;
    for (std::size_t w : widths_) {
        kernel_offset_.push_back(offset);
        offset += maps_ * w * dim_;
        bias_offset_.push_back(offset);
        offset += maps_;
    }
    dense_offset_ = offset;
    offset += features() * 2 + 2;
    params_.assign(offset, 0.0);
}

ConvNetModel::Pooled ConvNetModel::pool(const TokenSequence& seq) const {
    Pooled out;
    out.value.resize(features());
    out.where.resize(features());
    for (std::size_t b = 0; b < widths_.size(); ++b) {
        const std::size_t w = widths_[b];
        const std::size_t positions = seq.length > w ? seq.length - w + 1 : 1;
        for (std::size_t m = 0; m < maps_; ++m) {
            double best = -INFINITY;
            std::size_t best_t = 0;
            for (std::size_t t = 0; t < positions; ++t) {
                double z = params_[conv_bias_index(b, m)];
                const std::size_t rows = std::min(w, seq.length - std::min(t, seq.length));
                for (std::size_t j = 0; j < rows; ++j) {
                    const double* k = &params_[kernel_index(b, m, j, 0)];
                    const double* x = &seq.data[(t + j) * dim_];
                    for (std::size_t d = 0; d < dim_; ++d) z += k[d] * x[d];
                }
                if (z > best) {
                    best = z;
                    best_t = t;
                }
            }
            const std::size_t f = b * maps_ + m;
            out.value[f] = std::max(best, 0.0);
            out.where[f] = best_t;
        }
    }
    return out;
}

std::array<double, 2> ConvNetModel::probabilities(const TokenSequence& seq) const {
    const Pooled h = pool(seq);
    double z0 = params_[dense_bias_index(0)];
    double z1 = params_[dense_bias_index(1)];
    for (std::size_t f = 0; f < features(); ++f) {
        z0 += params_[dense_index(f, 0)] * h.value[f];
        z1 += params_[dense_index(f, 1)] * h.value[f];
    }
    return softmax2(z0, z1);
}

double ConvNetModel::loss_and_grad(const TokenSequence& seq, int label, std::span<const double> keep_scale,
                                   std::span<double> grad) const {
    const Pooled h = pool(seq);
    std::vector<double> dropped(h.value);
    if (!keep_scale.empty())
        for (std::size_t f = 0; f < dropped.size(); ++f) dropped[f] *= keep_scale[f];

    double z0 = params_[dense_bias_index(0)];
    double z1 = params_[dense_bias_index(1)];
    for (std::size_t f = 0; f < features(); ++f) {
        z0 += params_[dense_index(f, 0)] * dropped[f];
        z1 += params_[dense_index(f, 1)] * dropped[f];
    }
    const auto p = softmax2(z0, z1);
    const double loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
    if (grad.empty()) return loss;

    const double d0 = p[0] - (label == 0 ? 1.0 : 0.0);
    const double d1 = p[1] - (label == 1 ? 1.0 : 0.0);
    grad[dense_bias_index(0)] += d0;
    grad[dense_bias_index(1)] += d1;
    for (std::size_t f = 0; f < features(); ++f) {
        grad[dense_index(f, 0)] += d0 * dropped[f];
        grad[dense_index(f, 1)] += d1 * dropped[f];
        if (h.value[f] <= 0.0) continue;
        double dh = d0 * params_[dense_index(f, 0)] + d1 * params_[dense_index(f, 1)];
        if (!keep_scale.empty()) dh *= keep_scale[f];
        if (dh == 0.0) continue;
        const std::size_t b = f / maps_;
        const std::size_t m = f % maps_;
        const std::size_t t = h.where[f];
        grad[conv_bias_index(b, m)] += dh;
        const std::size_t rows = std::min(widths_[b], seq.length - std::min(t, seq.length));
        for (std::size_t j = 0; j < rows; ++j) {
            double* g = &grad[kernel_index(b, m, j, 0)];
            const double* x = &seq.data[(t + j) * dim_];
            for (std::size_t d = 0; d < dim_; ++d) g[d] += dh * x[d];
        }
    }
    return loss;
}

ConvNetFit train_convnet(const std::vector<ConvNetExample>& examples, const ConvNetConfig& cfg,
                         std::uint64_t seed) {
    bool has[2] = {false, false};
    for (const auto& e : examples) {
        if (e.label != 0 && e.label != 1) throw TrainingError("labels must be 0 or 1");
        if (e.input.length > cfg.max_len)
            throw TrainingError("sequence of length " + std::to_string(e.input.length) + " exceeds max_len " +
                                std::to_string(cfg.max_len));
        has[e.label] = true;
    }
    if (!has[0] || !has[1]) throw TrainingError("convnet training set contains a single class");
    if (cfg.widths.empty() || cfg.maps == 0 || cfg.batch_size == 0)
        throw TrainingError("convnet needs at least one kernel width, one map and a positive batch size");
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw TrainingError("dropout must lie in [0, 1)");

    const std::size_t dim = examples.front().input.dim;
    Rng rng(seed);
    ConvNetFit fit;
    fit.model = ConvNetModel(dim, cfg.widths, cfg.maps);
    auto& params = fit.model.params();
    for (std::size_t b = 0; b < cfg.widths.size(); ++b) {
        const double a = 1.0 / std::sqrt(static_cast<double>(cfg.widths[b] * dim));
        for (std::size_t m = 0; m < cfg.maps; ++m)
            for (std::size_t j = 0; j < cfg.widths[b]; ++j)
                for (std::size_t d = 0; d < dim; ++d) params[fit.model.kernel_index(b, m, j, d)] = rng.uniform(-a, a);
    }
    const double a_dense = 1.0 / std::sqrt(static_cast<double>(fit.model.features()));
    for (std::size_t f = 0; f < fit.model.features(); ++f)
        for (std::size_t c = 0; c < 2; ++c) params[fit.model.dense_index(f, c)] = rng.uniform(-a_dense, a_dense);

    std::vector<double> acc_grad(params.size(), 0.0);
    std::vector<double> acc_update(params.size(), 0.0);
    std::vector<double> grad(params.size());
    std::vector<double> keep(fit.model.features());
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    const double keep_scale = 1.0 / (1.0 - cfg.dropout);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < end; ++i) {
                for (double& k : keep) k = rng.uniform() < cfg.dropout ? 0.0 : keep_scale;
                const auto& ex = examples[order[i]];
                fit.model.loss_and_grad(ex.input, ex.label, keep, grad);
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t k = 0; k < params.size(); ++k) {
                const double g = grad[k] * inv;
                acc_grad[k] = cfg.rho * acc_grad[k] + (1.0 - cfg.rho) * g * g;
                const double update = g * std::sqrt(acc_update[k] + cfg.epsilon) / std::sqrt(acc_grad[k] + cfg.epsilon);
                params[k] -= cfg.learning_rate * update;
                acc_update[k] = cfg.rho * acc_update[k] + (1.0 - cfg.rho) * update * update;
            }
        }
    }

    std::size_t correct = 0;
    for (const auto& ex : examples) {
        fit.loss += fit.model.loss_and_grad(ex.input, ex.label, {}, {});
        correct += (fit.model.positive_probability(ex.input) > 0.5 ? 1 : 0) == ex.label;
    }
    fit.loss /= static_cast<double>(examples.size());
    fit.accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
    return fit;
}

}  // namespace vsp
