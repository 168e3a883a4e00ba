#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vsp/embeddings.hpp"

namespace vsp {

/// Two-class softmax over a dense input: logits = Wᵀx + b.
/// Parameters are one flat block: W row-major (dim × 2), then b.
struct LinearModel {
    std::size_t dim = 0;
    std::vector<double> params;

    LinearModel() = default;
    explicit LinearModel(std::size_t dim);

    double weight(std::size_t i, std::size_t c) const { return params[i * 2 + c]; }
    double bias(std::size_t c) const { return params[dim * 2 + c]; }

    std::array<double, 2> probabilities(std::span<const double> x) const;
    double positive_probability(std::span<const double> x) const { return probabilities(x)[1]; }
};

struct LinearTrainConfig {
    std::size_t epochs = 30;
    double learning_rate = 0.5;
    double init_scale = 0.01;
};

struct LinearExample {
    SentenceVector input;
    int label = 0;
};

struct LinearFit {
    LinearModel model;
    double loss = 0.0;      // mean cross-entropy on the training set
    double accuracy = 0.0;  // training accuracy
    std::vector<std::string> warnings;
};

/// Mean of the weighted embeddings: v / n_known, zero when nothing is known.
std::vector<double> linear_features(const SentenceVector& sv);

/// Cross-entropy of one example; adds its gradient into `grad` (same layout
/// as params) when non-empty.
double linear_loss_and_grad(const LinearModel& model, std::span<const double> x, int label,
                            std::span<double> grad);

/// Per-example SGD with a seeded shuffle each epoch. Throws TrainingError
/// unless both labels occur.
LinearFit train_linear(const std::vector<LinearExample>& examples, const LinearTrainConfig& cfg,
                       std::uint64_t seed);

/// Numerically stable two-way softmax.
std::array<double, 2> softmax2(double z0, double z1);

}  // namespace vsp
