#include "vsp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vsp/errors.hpp"
#include "vsp/random.hpp"

namespace vsp {

std::string_view to_string(Method m) { return m == Method::convnet ? "convnet" : "linear"; }

std::string_view to_string(VoteMode v) { return v == VoteMode::max_prob ? "max_prob" : "majority"; }

std::optional<VoteMode> parse_vote_mode(std::string_view s) {
    if (s == "max_prob") return VoteMode::max_prob;
    if (s == "majority") return VoteMode::majority;
    return std::nullopt;
}

PreparedInput prepare_input(const std::vector<std::string>& tokens, const VectorStore& store,
                            const IdfTable& idf, std::size_t max_len) {
    return {sentence_vector(tokens, store, idf), embed_sequence(tokens, store, max_len)};
}

double Submodel::positive_probability(const PreparedInput& in) const {
    if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->positive_probability(linear_features(in.sentence));
    return std::get<ConvNetModel>(model).positive_probability(in.sequence);
}

std::size_t Ensemble::submodel_count() const {
    std::size_t n = 0;
    for (const auto& per_method : classifiers)
        for (const auto& bc : per_method) n += bc.submodels.size();
    return n;
}

// ---------------------------------------------------------------------------
// Combination

double vote(const std::vector<double>& p, VoteMode mode) {
    if (p.empty()) return 0.0;
    if (mode == VoteMode::max_prob) return *std::max_element(p.begin(), p.end());

    const auto positive = static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.5; }));
    const std::size_t negative = p.size() - positive;
    double sum = 0.0;
    std::size_t n = 0;
    for (double x : p) {
        const bool is_positive = x > 0.5;
        if (positive == negative || (positive > negative) == is_positive) {
            sum += x;
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

std::vector<double> softmax(const std::vector<double>& z) {
    const double m = z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
    const double shift = m > 700.0 ? m : 0.0;
    std::vector<double> e(z.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        e[i] = std::exp(z[i] - shift);
        total += e[i];
    }
    for (double& x : e) x /= total;
    return e;
}

Combination combine_outputs(const SubmodelOutputs& outputs, const std::vector<std::vector<double>>& alpha,
                            VoteMode mode) {
    Combination out;
    const std::size_t categories = outputs.empty() ? 0 : outputs.front().size();
    out.per_method.assign(outputs.size(), std::vector<double>(categories, 0.0));
    out.pre_softmax.assign(categories, 0.0);
    for (std::size_t e = 0; e < outputs.size(); ++e)
        for (std::size_t c = 0; c < categories; ++c) out.per_method[e][c] = vote(outputs[e][c], mode);
    for (std::size_t c = 0; c < categories; ++c)
        for (std::size_t e = 0; e < outputs.size(); ++e) out.pre_softmax[c] += alpha[e][c] * out.per_method[e][c];
    out.scores = softmax(out.pre_softmax);
    for (std::size_t c = 1; c < categories; ++c)
        if (out.scores[c] > out.scores[out.winner]) out.winner = c;
    return out;
}

Category CategoryScores::method_winner(Method m) const {
    const auto& y = per_method[static_cast<std::size_t>(m)];
    return static_cast<Category>(std::max_element(y.begin(), y.end()) - y.begin());
}

SubmodelOutputs submodel_outputs(const Ensemble& ens, const PreparedInput& in) {
    SubmodelOutputs out(kMethodCount, std::vector<std::vector<double>>(kCategoryCount));
    for (std::size_t e = 0; e < kMethodCount; ++e)
        for (std::size_t c = 0; c < kCategoryCount; ++c)
            for (const auto& sm : ens.classifiers[e][c].submodels) out[e][c].push_back(sm.positive_probability(in));
    return out;
}

CategoryScores ensemble_predict(const Ensemble& ens, const PreparedInput& in, VoteMode mode) {
    std::vector<std::vector<double>> alpha(kMethodCount);
    for (std::size_t e = 0; e < kMethodCount; ++e) alpha[e].assign(ens.alpha[e].begin(), ens.alpha[e].end());
    const Combination comb = combine_outputs(submodel_outputs(ens, in), alpha, mode);
    CategoryScores out;
    std::copy(comb.scores.begin(), comb.scores.end(), out.scores.begin());
    for (std::size_t e = 0; e < kMethodCount; ++e)
        std::copy(comb.per_method[e].begin(), comb.per_method[e].end(), out.per_method[e].begin());
    out.winner = static_cast<Category>(comb.winner);
    return out;
}

CategoryScores ensemble_predict(const Ensemble& ens, const PreparedInput& in) {
    return ensemble_predict(ens, in, ens.cfg.vote_mode);
}

// ---------------------------------------------------------------------------
// Training

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(const std::vector<int>& labels,
                                                                               double train_fraction,
                                                                               std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> train, validation;
    for (int cls : {0, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        rng.shuffle(std::span(members));
        auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
        if (members.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
        train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        validation.insert(validation.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(validation.begin(), validation.end());
    return {train, validation};
}

namespace {

Submodel train_submodel(Method method, const std::vector<PreparedInput>& inputs, const std::vector<int>& labels,
                        const EnsembleConfig& cfg, std::uint64_t seed) {
    auto [train_idx, val_idx] = stratified_split(labels, cfg.train_fraction, seed);
    if (val_idx.empty()) throw TrainingError("validation split is empty; lower train_fraction");
    Submodel sm;
    sm.seed = seed;
    const std::uint64_t fit_seed = derive_seed(seed, 1);
    if (method == Method::linear) {
        std::vector<LinearExample> train;
        for (std::size_t i : train_idx) train.push_back({inputs[i].sentence, labels[i]});
        sm.model = train_linear(train, cfg.linear, fit_seed).model;
    } else {
        std::vector<ConvNetExample> train;
        for (std::size_t i : train_idx) train.push_back({inputs[i].sequence, labels[i]});
        sm.model = train_convnet(train, cfg.convnet, fit_seed).model;
    }
    std::size_t correct = 0;
    for (std::size_t i : val_idx) correct += (sm.positive_probability(inputs[i]) > 0.5 ? 1 : 0) == labels[i];
    sm.validation_accuracy = static_cast<double>(correct) / static_cast<double>(val_idx.size());
    return sm;
}

}  // namespace

Ensemble train_ensemble(const std::vector<LabeledQuestion>& dataset, const VectorStore& store,
                        const EnsembleConfig& cfg, std::uint64_t seed) {
    std::array<std::size_t, kCategoryCount> support{};
    for (const auto& q : dataset) ++support[index_of(q.category)];
    for (Category c : kAllCategories)
        if (support[index_of(c)] < cfg.min_support)
            throw TrainingError("category " + std::string(to_string(c)) + " has " +
                                std::to_string(support[index_of(c)]) + " examples, minimum is " +
                                std::to_string(cfg.min_support));
    if (cfg.submodels == 0) throw TrainingError("at least one submodel per classifier is required");

    Ensemble ens;
    ens.dim = store.dim();
    ens.seed = seed;
    ens.cfg = cfg;
    std::vector<std::vector<std::string>> corpus;
    corpus.reserve(dataset.size());
    for (const auto& q : dataset) corpus.push_back(q.tokens);
    ens.idf = compute_idf(corpus);

    std::vector<PreparedInput> inputs;
    inputs.reserve(dataset.size());
    for (const auto& q : dataset) inputs.push_back(prepare_input(q.tokens, store, ens.idf, cfg.convnet.max_len));

    for (Method method : kAllMethods) {
        const auto e = static_cast<std::size_t>(method);
        for (Category category : kAllCategories) {
            std::vector<int> labels(dataset.size());
            for (std::size_t i = 0; i < dataset.size(); ++i) labels[i] = dataset[i].category == category ? 1 : 0;
            BinaryClassifier& bc = ens.classifiers[e][index_of(category)];
            bc.category = category;
            bc.method = method;
            double accuracy_sum = 0.0;
            for (std::size_t k = 0; k < cfg.submodels; ++k) {
                const std::uint64_t sub_seed = derive_seed(seed, e + 1, index_of(category) + 1, k + 1);
                bc.submodels.push_back(train_submodel(method, inputs, labels, cfg, sub_seed));
                accuracy_sum += bc.submodels.back().validation_accuracy;
            }
            ens.alpha[e][index_of(category)] = accuracy_sum / static_cast<double>(cfg.submodels);
        }
    }
    return ens;
}

CrossValidationReport cross_validate(const std::vector<LabeledQuestion>& dataset, const VectorStore& store,
                                     const EnsembleConfig& cfg, std::uint64_t seed, std::size_t folds) {
    if (folds < 2) throw TrainingError("cross-validation needs at least two folds");
    std::vector<std::size_t> fold_of(dataset.size());
    Rng rng(derive_seed(seed, 0xCF));
    for (Category c : kAllCategories) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].category == c) members.push_back(i);
        rng.shuffle(std::span(members));
        for (std::size_t j = 0; j < members.size(); ++j) fold_of[members[j]] = j % folds;
    }

    CrossValidationReport report;
    report.folds = folds;
    std::array<std::size_t, kMethodCount> method_correct{};
    std::size_t combined_correct = 0, total = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<LabeledQuestion> train, test;
        for (std::size_t i = 0; i < dataset.size(); ++i) (fold_of[i] == f ? test : train).push_back(dataset[i]);
        const Ensemble ens = train_ensemble(train, store, cfg, derive_seed(seed, f + 1));
        for (const auto& q : test) {
            const auto scores = ensemble_predict(ens, prepare_input(q.tokens, store, ens.idf, cfg.convnet.max_len));
            combined_correct += scores.winner == q.category;
            for (Method m : kAllMethods) method_correct[static_cast<std::size_t>(m)] += scores.method_winner(m) == q.category;
            ++total;
        }
    }
    const double n = static_cast<double>(std::max<std::size_t>(total, 1));
    for (std::size_t e = 0; e < kMethodCount; ++e) report.method_accuracy[e] = static_cast<double>(method_correct[e]) / n;
    report.combined_accuracy = static_cast<double>(combined_correct) / n;
    return report;
}

}  // namespace vsp
