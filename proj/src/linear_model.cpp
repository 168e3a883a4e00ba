#include "vsp/linear_model.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "vsp/errors.hpp"
#include "vsp/random.hpp"

namespace vsp {

std::array<double, 2> softmax2(double z0, double z1) {
    const double m = std::max(z0, z1);
    const double e0 = std::exp(z0 - m);
    const double e1 = std::exp(z1 - m);
    const double s = e0 + e1;
    return {e0 / s, e1 / s};
}

LinearModel::LinearModel(std::size_t d) : dim(d), params(d * 2 + 2, 0.0) {}

std::array<double, 2> LinearModel::probabilities(std::span<const double> x) const {
    double z0 = bias(0), z1 = bias(1);
    for (std::size_t i = 0; i < dim; ++i) {
        z0 += weight(i, 0) * x[i];
        z1 += weight(i, 1) * x[i];
    }
    return softmax2(z0, z1);
}

std::vector<double> linear_features(const SentenceVector& sv) {
    std::vector<double> x = sv.v;
    if (sv.n_known > 0)
        for (double& v : x) v /= static_cast<double>(sv.n_known);
    return x;
}

double linear_loss_and_grad(const LinearModel& model, std::span<const double> x, int label,
                            std::span<double> grad) {
    const auto p = model.probabilities(x);
    const double loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
    if (!grad.empty()) {
        const double d0 = p[0] - (label == 0 ? 1.0 : 0.0);
        const double d1 = p[1] - (label == 1 ? 1.0 : 0.0);
        for (std::size_t i = 0; i < model.dim; ++i) {
            grad[i * 2] += d0 * x[i];
            grad[i * 2 + 1] += d1 * x[i];
        }
        grad[model.dim * 2] += d0;
        grad[model.dim * 2 + 1] += d1;
    }
    return loss;
}

LinearFit train_linear(const std::vector<LinearExample>& examples, const LinearTrainConfig& cfg,
                       std::uint64_t seed) {
    bool has[2] = {false, false};
    for (const auto& e : examples) {
        if (e.label != 0 && e.label != 1) throw TrainingError("labels must be 0 or 1");
        has[e.label] = true;
    }
    if (!has[0] || !has[1]) throw TrainingError("linear training set contains a single class");

    const std::size_t dim = examples.front().input.v.size();
    std::vector<std::vector<double>> features;
    features.reserve(examples.size());
    for (const auto& e : examples) {
        if (e.input.v.size() != dim) throw TrainingError("inconsistent input dimensions");
        features.push_back(linear_features(e.input));
    }

    Rng rng(seed);
    LinearFit fit;
    fit.model = LinearModel(dim);
    for (std::size_t i = 0; i < dim * 2; ++i) fit.model.params[i] = rng.uniform(-cfg.init_scale, cfg.init_scale);

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(fit.model.params.size());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (std::size_t idx : order) {
            std::fill(grad.begin(), grad.end(), 0.0);
            linear_loss_and_grad(fit.model, features[idx], examples[idx].label, grad);
            for (std::size_t k = 0; k < grad.size(); ++k) fit.model.params[k] -= cfg.learning_rate * grad[k];
        }
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        fit.loss += linear_loss_and_grad(fit.model, features[i], examples[i].label, {});
        const int predicted = fit.model.positive_probability(features[i]) > 0.5 ? 1 : 0;
        correct += predicted == examples[i].label;
    }
    fit.loss /= static_cast<double>(examples.size());
    fit.accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
    if (correct != examples.size())
        fit.warnings.push_back("training set not separated: accuracy " + std::to_string(fit.accuracy));
    std::map<std::vector<double>, int> label_masks;
    for (std::size_t i = 0; i < examples.size(); ++i) label_masks[features[i]] |= 1 << examples[i].label;
    for (const auto& [x, mask] : label_masks)
        if (mask == 3) {
            fit.warnings.push_back("non-separable: identical inputs carry both labels");
            break;
        }
    return fit;
}

}  // namespace vsp
