#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vsp/category.hpp"
#include "vsp/convnet.hpp"
#include "vsp/embeddings.hpp"
#include "vsp/linear_model.hpp"

namespace vsp {

enum class Method : int { convnet = 0, linear = 1 };
inline constexpr std::size_t kMethodCount = 2;
inline constexpr std::array<Method, kMethodCount> kAllMethods = {Method::convnet, Method::linear};

enum class VoteMode { max_prob, majority };

std::string_view to_string(Method m);
std::string_view to_string(VoteMode v);
std::optional<VoteMode> parse_vote_mode(std::string_view s);

/// What each submodel family sees for one question.
struct PreparedInput {
    SentenceVector sentence;  // IDF-weighted sum, fed to the linear models
    TokenSequence sequence;   // raw embeddings, fed to the convnets
};

PreparedInput prepare_input(const std::vector<std::string>& tokens, const VectorStore& store,
                            const IdfTable& idf, std::size_t max_len);

struct Submodel {
    std::uint64_t seed = 0;
    double validation_accuracy = 0.0;
    std::variant<LinearModel, ConvNetModel> model;

    double positive_probability(const PreparedInput& in) const;
};

struct BinaryClassifier {
    Category category = Category::unknown;
    Method method = Method::linear;
    std::vector<Submodel> submodels;
};

using AlphaTable = std::array<std::array<double, kCategoryCount>, kMethodCount>;

struct EnsembleConfig {
    LinearTrainConfig linear;
    ConvNetConfig convnet;
    std::size_t submodels = 5;
    double train_fraction = 0.8;
    std::size_t min_support = 10;
    VoteMode vote_mode = VoteMode::max_prob;
};

struct Ensemble {
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    EnsembleConfig cfg;
    IdfTable idf;
    std::array<std::array<BinaryClassifier, kCategoryCount>, kMethodCount> classifiers;
    AlphaTable alpha{};

    const BinaryClassifier& classifier(Method m, Category c) const {
        return classifiers[static_cast<std::size_t>(m)][index_of(c)];
    }
    std::size_t submodel_count() const;
};

/// Positive-class probabilities indexed [method][category][submodel].
using SubmodelOutputs = std::vector<std::vector<std::vector<double>>>;

struct Combination {
    std::vector<std::vector<double>> per_method;  // Ŷ_e, indexed [method][category]
    std::vector<double> pre_softmax;              // Σ_e α_e ⊙ Ŷ_e
    std::vector<double> scores;                   // softmax of pre_softmax
    std::size_t winner = 0;                       // argmax, lowest index on ties
};

/// Reduces one binary classifier's submodel outputs to its Ŷ_c.
double vote(const std::vector<double>& submodel_probabilities, VoteMode mode);

/// Combination of submodel outputs for any number of methods and categories.
/// `alpha` is indexed [method][category].
Combination combine_outputs(const SubmodelOutputs& outputs, const std::vector<std::vector<double>>& alpha,
                            VoteMode mode);

std::vector<double> softmax(const std::vector<double>& z);

struct CategoryScores {
    std::array<double, kCategoryCount> scores{};
    Category winner = Category::unknown;
    std::array<std::array<double, kCategoryCount>, kMethodCount> per_method{};

    /// Winner of a single method's Ŷ_e, for per-method accuracy reports.
    Category method_winner(Method m) const;
};

SubmodelOutputs submodel_outputs(const Ensemble& ens, const PreparedInput& in);
CategoryScores ensemble_predict(const Ensemble& ens, const PreparedInput& in);
CategoryScores ensemble_predict(const Ensemble& ens, const PreparedInput& in, VoteMode mode);

struct LabeledQuestion {
    std::vector<std::string> tokens;
    Category category = Category::unknown;
};

/// Throws TrainingError when a category has fewer than cfg.min_support examples.
Ensemble train_ensemble(const std::vector<LabeledQuestion>& dataset, const VectorStore& store,
                        const EnsembleConfig& cfg, std::uint64_t seed);

/// Stratified split of `labels` (0/1) into train and validation index sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, std::uint64_t seed);

struct CrossValidationReport {
    std::size_t folds = 0;
    std::array<double, kMethodCount> method_accuracy{};
    double combined_accuracy = 0.0;
};

/// k-fold accuracy of each method alone and of the combination; reporting only.
CrossValidationReport cross_validate(const std::vector<LabeledQuestion>& dataset, const VectorStore& store,
                                     const EnsembleConfig& cfg, std::uint64_t seed, std::size_t folds);

/// Overrides fields of `base` present in `j` (the manifest's "config" shape).
EnsembleConfig ensemble_config_from_json(const nlohmann::json& j, EnsembleConfig base);

/// Single-file archive: header, JSON manifest, little-endian float64 blocks.
void save_ensemble(const Ensemble& ens, const std::filesystem::path& path);
Ensemble load_ensemble(const std::filesystem::path& path);
std::string serialize_ensemble(const Ensemble& ens);
Ensemble deserialize_ensemble(std::string_view bytes);

}  // namespace vsp
