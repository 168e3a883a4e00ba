#include "vsp/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "vsp/errors.hpp"

namespace vsp {

bool ConceptLexicon::contains(std::string_view name) const { return concepts_.contains(name); }

const ConceptLexicon::MemberSet& ConceptLexicon::members(std::string_view name) const {
    auto it = concepts_.find(name);
    if (it == concepts_.end()) throw std::out_of_range("unknown concept " + std::string(name));
    return it->second;
}

std::vector<std::string> ConceptLexicon::concepts_of(std::string_view lemma) const {
    auto it = owners_.find(lemma);
    return it == owners_.end() ? std::vector<std::string>{} : it->second;
}

void ConceptLexicon::add(std::string name, MemberSet members, std::size_t line) {
    if (name.size() < 2 || name.front() != '~') throw ParseError("concept name must start with '~'", line);
    if (members.empty()) throw ParseError("concept " + name + " has no members", line);
    if (concepts_.contains(name)) throw ParseError("duplicate concept " + name, line);
    for (const auto& m : members) {
        auto& owners = owners_[m];
        owners.insert(std::upper_bound(owners.begin(), owners.end(), name), name);
    }
    concepts_.emplace(std::move(name), std::move(members));
}

std::string normalize_authored_word(std::string_view word, const NormalizerConfig& cfg,
                                    std::size_t line) {
    NormalizerConfig no_stop = cfg;
    no_stop.stopwords.clear();
    auto tokens = normalize(word, no_stop).tokens;
    if (tokens.size() != 1)
        throw ParseError("'" + std::string(word) + "' does not normalize to a single word", line);
    if (cfg.stopwords.contains(tokens.front()))
        throw ParseError("'" + std::string(word) + "' is a stopword and can never match", line);
    return tokens.front();
}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;

    void skip_space_and_comments() {
        while (pos < text.size()) {
            const char c = text[pos];
            if (c == '\n') {
                ++line;
                ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos;
            } else if (c == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_space_and_comments();
        return pos >= text.size();
    }

    std::string_view word() {
        skip_space_and_comments();
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '[' && text[pos] != ']')
            ++pos;
        if (start == pos && pos < text.size() && (text[pos] == '[' || text[pos] == ']')) ++pos;
        return text.substr(start, pos - start);
    }
};

}  // namespace

ConceptLexicon parse_lexicon(std::string_view text, const NormalizerConfig& cfg) {
    ConceptLexicon lex;
    Cursor cur{text};
    while (!cur.at_end()) {
        const std::size_t block_line = cur.line;
        if (cur.word() != "concept:") throw ParseError("expected 'concept:'", block_line);
        std::string name(cur.word());
        if (name.size() < 2 || name.front() != '~')
            throw ParseError("concept name must start with '~'", block_line);
        if (cur.word() != "[") throw ParseError("expected '[' after " + name, block_line);
        ConceptLexicon::MemberSet members;
        for (;;) {
            if (cur.at_end()) throw ParseError("unterminated member list for " + name, block_line);
            const std::size_t member_line = cur.line;
            std::string_view w = cur.word();
            if (w == "]") break;
            if (w == "[") throw ParseError("unexpected '['", member_line);
            if (w.front() == '~')
                throw ParseError("concept " + name + " lists concept " + std::string(w) +
                                     "; concepts do not nest",
                                 member_line);
            members.insert(normalize_authored_word(w, cfg, member_line));
        }
        lex.add(std::move(name), std::move(members), block_line);
    }
    return lex;
}

ConceptLexicon parse_lexicon(std::string_view text) { return parse_lexicon(text, NormalizerConfig{}); }

}  // namespace vsp
