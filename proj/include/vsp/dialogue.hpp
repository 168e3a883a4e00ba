#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsp/engine_config.hpp"
#include "vsp/ensemble.hpp"
#include "vsp/lexicon.hpp"
#include "vsp/normalizer.hpp"
#include "vsp/retrieve.hpp"
#include "vsp/rules.hpp"

namespace vsp {

enum class AnswerPath { rule, similarity, rephrase };

std::string_view to_string(AnswerPath p);
std::optional<AnswerPath> parse_answer_path(std::string_view s);

/// Everything needed to re-derive the answer path offline.
struct ResponseTrace {
    std::vector<std::string> tokens;
    // rule path
    std::optional<std::string> rule_id;
    std::optional<Category> rule_topic;
    bool rejoinder = false;
    std::vector<std::string> skipped_rules;
    // classifier + retrieval
    std::optional<CategoryScores> scores;
    std::optional<std::string> kb_question;
    std::optional<double> distance;
    double tau = 0.0;
    std::size_t n_known = 0;
    // rephrase: empty | oov | unknown_category | empty_partition | rejected
    std::string reason;

    nlohmann::json to_json() const;
    static ResponseTrace from_json(const nlohmann::json& j);
};

struct DialogueResponse {
    std::string text;
    AnswerPath path = AnswerPath::rephrase;
    ResponseTrace trace;
    std::size_t turn_index = 0;

    /// API shape: {"answer", "path", "trace", "turn"}.
    nlohmann::json to_json() const;
};

/// The path a trace implies, computed from trace fields alone.
AnswerPath infer_path(const ResponseTrace& trace);

struct Turn {
    std::string question;
    DialogueResponse response;
};

struct Session {
    std::string id;
    SessionMemory memory;
    std::vector<Turn> transcript;
    std::chrono::system_clock::time_point created_at = std::chrono::system_clock::now();

    explicit Session(std::string id = {}) : id(std::move(id)) {}
};

struct EngineStats {
    std::atomic<std::size_t> rule_scans{0};
    std::atomic<std::size_t> classifier_calls{0};
    std::atomic<std::size_t> retrieval_calls{0};
};

/// Rules, ensemble and knowledge base, immutable once built; one instance
/// serves every session.
class Engine {
public:
    Engine(NormalizerConfig norm, ConceptLexicon lexicon, RuleSet rules, VectorStore store, Ensemble ensemble,
           KnowledgeBase kb, std::string rephrase = std::string(kDefaultRephrase));

    /// Loads every asset named by `cfg`; the ensemble archive must exist.
    static std::unique_ptr<Engine> load(const EngineConfig& cfg);

    /// One turn. Appends to session.transcript and returns a copy of the response.
    DialogueResponse handle(Session& session, std::string_view question) const;

    const NormalizerConfig& normalizer() const { return norm_; }
    const ConceptLexicon& lexicon() const { return lexicon_; }
    const RuleSet& rules() const { return rules_; }
    const VectorStore& vectors() const { return store_; }
    const Ensemble& ensemble() const { return ensemble_; }
    const KnowledgeBase& kb() const { return kb_; }
    const std::string& rephrase_text() const { return rephrase_; }
    const EngineStats& stats() const { return stats_; }

private:
    DialogueResponse answer(SessionMemory& memory, std::string_view question) const;

    NormalizerConfig norm_;
    ConceptLexicon lexicon_;
    RuleSet rules_;
    VectorStore store_;
    Ensemble ensemble_;
    KnowledgeBase kb_;
    std::string rephrase_;
    mutable EngineStats stats_;
};

/// Lexicon + rules from files, normalized with `norm`.
RuleSet load_rule_assets(const EngineConfig& cfg, const NormalizerConfig& norm, ConceptLexicon* lexicon_out);

/// Labeled training questions from KB-format JSONL (`answer` optional).
std::vector<LabeledQuestion> load_training_questions(const std::filesystem::path& path, const NormalizerConfig& norm);

struct ReplayEntry {
    std::string question;
    std::optional<AnswerPath> expected_path;
    std::optional<std::string> expected_answer;
};

struct ReplayOutcome {
    ReplayEntry entry;
    DialogueResponse response;
    bool path_ok = true;
    bool answer_ok = true;
    bool trace_consistent = true;

    bool ok() const { return path_ok && answer_ok && trace_consistent; }
};

std::vector<ReplayEntry> parse_replay(std::string_view jsonl);
std::vector<ReplayEntry> load_replay(const std::filesystem::path& path);

/// Runs every entry through one fresh session.
std::vector<ReplayOutcome> run_replay(const Engine& engine, const std::vector<ReplayEntry>& entries);

}  // namespace vsp
