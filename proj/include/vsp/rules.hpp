#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vsp/category.hpp"
#include "vsp/lexicon.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

struct PatternAtom {
    enum class Kind { word, concept_set, wildcard };

    Kind kind = Kind::word;
    std::string text;                  // lemma, or concept name with leading '~'
    std::vector<std::string> members;  // sorted; concept atoms only
    std::size_t min_gap = 0;           // wildcard atoms only
    std::size_t max_gap = 0;

    static PatternAtom word(std::string lemma);
    static PatternAtom concept_set(std::string name, const ConceptLexicon& lex);
    static PatternAtom wildcard(std::size_t min_gap, std::size_t max_gap);

    bool accepts(std::string_view token) const;
};

struct MemoryWrite {
    std::string slot;
    std::string value;               // literal, used when capture == 0
    std::size_t capture = 0;         // 1-based wildcard index, 0 for literal
};

struct DialogueRule {
    std::string id;
    Category topic = Category::unknown;
    std::vector<PatternAtom> pattern;
    std::string response;
    std::vector<MemoryWrite> memory_writes;
    int priority = 0;
    std::optional<std::string> rejoinder_of;
    std::size_t file_order = 0;
    std::size_t line = 0;
};

class RuleSet {
public:
    explicit RuleSet(std::vector<DialogueRule> rules = {});

    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }
    const std::vector<DialogueRule>& rules() const { return rules_; }
    const DialogueRule* find(std::string_view id) const;

    /// Top-level (non-rejoinder) rules by priority descending, then file order.
    const std::vector<std::size_t>& scan_order() const { return scan_order_; }
    /// Rejoinders attached to `parent_id`, same ordering.
    const std::vector<std::size_t>& rejoinders_of(std::string_view parent_id) const;
    std::vector<const DialogueRule*> by_topic(Category topic) const;

private:
    std::vector<DialogueRule> rules_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> scan_order_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> rejoinders_;
};

/// Per-session dialogue state owned by the rule matcher.
struct SessionMemory {
    std::map<std::string, std::string> slots;
    std::optional<std::string> last_rule;
    std::optional<Category> last_topic;
    /// True only between the firing of `last_rule` and the end of the next turn.
    bool followup_open = false;

    bool operator==(const SessionMemory&) const = default;
};

struct RuleMatch {
    std::string rule_id;
    Category topic = Category::unknown;
    std::string response;
    std::vector<std::string> captures;
    bool rejoinder = false;
    /// Rules whose pattern matched but whose template referenced an unset slot.
    std::vector<std::string> skipped;
};

RuleSet parse_rules(std::string_view text, const ConceptLexicon& lexicon, const NormalizerConfig& cfg);
RuleSet parse_rules(std::string_view text, const ConceptLexicon& lexicon);

/// Aligns the pattern anywhere in `tokens`. Consecutive non-wildcard atoms
/// must be adjacent; wildcards are greedy. Returns one capture per wildcard.
std::optional<std::vector<std::string>> match_pattern(const std::vector<PatternAtom>& pattern,
                                                      const std::vector<std::string>& tokens);

/// Finds the first applicable rule and applies its memory writes. `mem` is
/// left untouched when nothing matches.
std::optional<RuleMatch> match(const RuleSet& rules, SessionMemory& mem,
                               const std::vector<std::string>& tokens);

/// Substitutes `{slot}` placeholders; nullopt if a referenced slot is unset.
std::optional<std::string> render_template(std::string_view tmpl,
                                           const std::map<std::string, std::string>& slots);

}  // namespace vsp
