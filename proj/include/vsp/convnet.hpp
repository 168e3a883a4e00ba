#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vsp/embeddings.hpp"

namespace vsp {

/// Defaults: kernel widths 3 to 5, 300 maps, dropout 0.4, Adadelta at rate 3.0.
struct ConvNetConfig {
    std::vector<std::size_t> widths{3, 4, 5};
    std::size_t maps = 300;
    double dropout = 0.4;
    double learning_rate = 3.0;
    double rho = 0.95;
    double epsilon = 1e-6;
    std::size_t epochs = 10;
    std::size_t batch_size = 50;
    std::size_t max_len = 50;
};

/// Row-major `length × dim` embeddings of a sentence. Positions past
/// `length` up to max_len are implicit zero padding.
struct TokenSequence {
    std::size_t dim = 0;
    std::size_t length = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t t) const { return {data.data() + t * dim, dim}; }
};

/// Raw embeddings of the in-vocabulary tokens, truncated to `max_len`.
TokenSequence embed_sequence(const std::vector<std::string>& tokens, const VectorStore& store,
                             std::size_t max_len);

/// conv (one bank per width) → ReLU → max over valid positions → dropout →
/// dense two-way softmax. All parameters live in one flat block.
class ConvNetModel {
public:
    ConvNetModel() = default;
    ConvNetModel(std::size_t dim, std::vector<std::size_t> widths, std::size_t maps);

    std::size_t dim() const { return dim_; }
    std::size_t maps() const { return maps_; }
    const std::vector<std::size_t>& widths() const { return widths_; }
    std::size_t features() const { return widths_.size() * maps_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    std::size_t kernel_index(std::size_t bank, std::size_t map, std::size_t offset, std::size_t d) const {
        return kernel_offset_[bank] + (map * widths_[bank] + offset) * dim_ + d;
    }
    std::size_t conv_bias_index(std::size_t bank, std::size_t map) const { return bias_offset_[bank] + map; }
    std::size_t dense_index(std::size_t feature, std::size_t c) const { return dense_offset_ + feature * 2 + c; }
    std::size_t dense_bias_index(std::size_t c) const { return dense_offset_ + features() * 2 + c; }

    /// Inference forward pass (no dropout).
    std::array<double, 2> probabilities(const TokenSequence& seq) const;
    double positive_probability(const TokenSequence& seq) const { return probabilities(seq)[1]; }

    /// Forward + backward for one example. `keep_scale[f]` multiplies pooled
    /// feature f (0 for dropped units, 1/(1-p) for kept); empty means no
    /// dropout. Gradient is added into `grad` when non-empty.
    double loss_and_grad(const TokenSequence& seq, int label, std::span<const double> keep_scale,
                         std::span<double> grad) const;

private:
    struct Pooled {
        std::vector<double> value;      // ReLU(max conv), per feature
        std::vector<std::size_t> where; // argmax position, per feature
    };
    Pooled pool(const TokenSequence& seq) const;

    std::size_t dim_ = 0;
    std::vector<std::size_t> widths_;
    std::size_t maps_ = 0;
    std::vector<std::size_t> kernel_offset_;
    std::vector<std::size_t> bias_offset_;
    std::size_t dense_offset_ = 0;
    std::vector<double> params_;
};

struct ConvNetExample {
    TokenSequence input;
    int label = 0;
};

struct ConvNetFit {
    ConvNetModel model;
    double loss = 0.0;
    double accuracy = 0.0;
};

/// Minibatch Adadelta. Throws TrainingError on a single-class set or a
/// sequence longer than cfg.max_len.
ConvNetFit train_convnet(const std::vector<ConvNetExample>& examples, const ConvNetConfig& cfg,
                         std::uint64_t seed);

}  // namespace vsp
