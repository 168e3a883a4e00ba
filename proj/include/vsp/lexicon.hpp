#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/normalizer.hpp"

namespace vsp {

/// Synonym classes keyed by `~name`. One level only: members are lemmas,
/// never other concepts.
class ConceptLexicon {
public:
    using MemberSet = std::set<std::string>;

    bool contains(std::string_view name) const;
    /// Throws std::out_of_range for an unknown concept.
    const MemberSet& members(std::string_view name) const;
    /// Names of every concept listing `lemma`, in name order.
    std::vector<std::string> concepts_of(std::string_view lemma) const;

    const std::map<std::string, MemberSet, std::less<>>& concepts() const { return concepts_; }
    std::size_t size() const { return concepts_.size(); }
    bool empty() const { return concepts_.empty(); }

    /// Throws ParseError if `name` already exists or `members` is empty.
    void add(std::string name, MemberSet members, std::size_t line = 0);

private:
    std::map<std::string, MemberSet, std::less<>> concepts_;
    std::map<std::string, std::vector<std::string>, std::less<>> owners_;
};

/// Parses `concept: ~name [ w1 w2 ... ]` blocks (a block may span lines).
/// Members are folded and mapped through the spelling and lemma tables.
ConceptLexicon parse_lexicon(std::string_view text, const NormalizerConfig& cfg);
ConceptLexicon parse_lexicon(std::string_view text);

/// Folds, spell-corrects and lemmatizes one authored word. Throws
/// ParseError when the word does not reduce to exactly one non-stopword.
std::string normalize_authored_word(std::string_view word, const NormalizerConfig& cfg,
                                    std::size_t line);

}  // namespace vsp
