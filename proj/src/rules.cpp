#include "vsp/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>

#include "vsp/errors.hpp"

namespace vsp {

PatternAtom PatternAtom::word(std::string lemma) {
    PatternAtom a;
    a.kind = Kind::word;
    a.text = std::move(lemma);
    return a;
}

PatternAtom PatternAtom::concept_set(std::string name, const ConceptLexicon& lex) {
    PatternAtom a;
    a.kind = Kind::concept_set;
    const auto& members = lex.members(name);
    a.members.assign(members.begin(), members.end());
    a.text = std::move(name);
    return a;
}

PatternAtom PatternAtom::wildcard(std::size_t min_gap, std::size_t max_gap) {
    PatternAtom a;
    a.kind = Kind::wildcard;
    a.text = "*";
    a.min_gap = min_gap;
    a.max_gap = max_gap;
    return a;
}

bool PatternAtom::accepts(std::string_view token) const {
    switch (kind) {
        case Kind::word: return token == text;
        case Kind::concept_set: return std::binary_search(members.begin(), members.end(), token);
        case Kind::wildcard: return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// RuleSet

RuleSet::RuleSet(std::vector<DialogueRule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        rules_[i].file_order = i;
        index_.emplace(rules_[i].id, i);
    }
    auto by_priority = [this](std::size_t a, std::size_t b) {
        return rules_[a].priority > rules_[b].priority;
    };
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].rejoinder_of)
            rejoinders_[*rules_[i].rejoinder_of].push_back(i);
        else
            scan_order_.push_back(i);
    }
    std::stable_sort(scan_order_.begin(), scan_order_.end(), by_priority);
    for (auto& [parent, list] : rejoinders_) std::stable_sort(list.begin(), list.end(), by_priority);
}

const DialogueRule* RuleSet::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &rules_[it->second];
}

const std::vector<std::size_t>& RuleSet::rejoinders_of(std::string_view parent_id) const {
    static const std::vector<std::size_t> none;
    auto it = rejoinders_.find(parent_id);
    return it == rejoinders_.end() ? none : it->second;
}

std::vector<const DialogueRule*> RuleSet::by_topic(Category topic) const {
    std::vector<const DialogueRule*> out;
    for (const auto& r : rules_)
        if (r.topic == topic) out.push_back(&r);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

bool valid_identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

std::size_t parse_count(std::string_view s, std::size_t line, std::string_view what) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'", line);
    return v;
}

std::vector<PatternAtom> parse_pattern(std::string_view text, const ConceptLexicon& lex,
                                       const NormalizerConfig& cfg, std::size_t line) {
    std::vector<PatternAtom> atoms;
    bool has_anchor = false;
    for (auto tok : split_ws(text)) {
        if (tok == "*") {
            atoms.push_back(PatternAtom::wildcard(0, 3));
        } else if (tok.starts_with("*~")) {
            atoms.push_back(PatternAtom::wildcard(0, parse_count(tok.substr(2), line, "wildcard bound")));
        } else if (tok.front() == '~') {
            if (!lex.contains(tok)) throw ParseError("undefined concept " + std::string(tok), line);
            atoms.push_back(PatternAtom::concept_set(std::string(tok), lex));
            has_anchor = true;
        } else if (tok.front() == '*') {
            throw ParseError("malformed wildcard '" + std::string(tok) + "'", line);
        } else {
            atoms.push_back(PatternAtom::word(normalize_authored_word(tok, cfg, line)));
            has_anchor = true;
        }
    }
    if (atoms.empty()) throw ParseError("empty pattern", line);
    if (!has_anchor) throw ParseError("pattern needs at least one word or concept", line);
    return atoms;
}

// Reads a double-quoted string starting at s[pos]; supports \" and \\.
std::string read_quoted(std::string_view s, std::size_t& pos, std::size_t line) {
    if (pos >= s.size() || s[pos] != '"') throw ParseError("expected quoted response", line);
    std::string out;
    for (++pos; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c == '\\' && pos + 1 < s.size()) {
            out += s[++pos];
        } else if (c == '"') {
            ++pos;
            return out;
        } else {
            out += c;
        }
    }
    throw ParseError("unterminated response string", line);
}

std::vector<MemoryWrite> parse_writes(std::string_view rest, std::size_t wildcard_count,
                                      std::size_t line) {
    std::vector<MemoryWrite> writes;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) ++pos;
    };
    for (skip(); pos < rest.size(); skip()) {
        if (rest.substr(pos, 4) != "set " && rest.substr(pos, 4) != "set\t")
            throw ParseError("unexpected text after response: '" + std::string(rest.substr(pos)) + "'", line);
        pos += 4;
        skip();
        const auto eq = rest.find('=', pos);
        if (eq == std::string_view::npos) throw ParseError("expected slot=value", line);
        MemoryWrite w;
        w.slot = std::string(trim(rest.substr(pos, eq - pos)));
        if (!valid_identifier(w.slot)) throw ParseError("invalid slot name '" + w.slot + "'", line);
        pos = eq + 1;
        if (pos < rest.size() && rest[pos] == '"') {
            w.value = read_quoted(rest, pos, line);
        } else {
            const std::size_t start = pos;
            while (pos < rest.size() && rest[pos] != ' ' && rest[pos] != '\t') ++pos;
            std::string_view v = rest.substr(start, pos - start);
            if (v.empty()) throw ParseError("empty value for slot " + w.slot, line);
            if (v.front() == '$') {
                w.capture = parse_count(v.substr(1), line, "capture index");
                if (w.capture == 0 || w.capture > wildcard_count)
                    throw ParseError("capture " + std::string(v) + " has no matching wildcard", line);
            } else {
                w.value = std::string(v);
            }
        }
        writes.push_back(std::move(w));
    }
    return writes;
}

DialogueRule parse_rule_line(std::string_view line_text, Category topic, const ConceptLexicon& lex,
                             const NormalizerConfig& cfg, std::size_t line) {
    const auto colon = line_text.find(':');
    const auto arrow = line_text.find("->", colon == std::string_view::npos ? 0 : colon);
    if (colon == std::string_view::npos || arrow == std::string_view::npos)
        throw ParseError("expected '<header> : <pattern> -> \"<response>\"'", line);

    DialogueRule rule;
    rule.topic = topic;
    rule.line = line;
    auto header = split_ws(line_text.substr(0, colon));
    const bool is_rejoinder = header.front() == "rejoinder";
    if (header.size() < 2) throw ParseError("missing rule id", line);
    rule.id = std::string(header[1]);
    if (!valid_identifier(rule.id)) throw ParseError("invalid rule id '" + rule.id + "'", line);
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i].starts_with("prio=")) {
            rule.priority = static_cast<int>(parse_count(header[i].substr(5), line, "priority"));
        } else if (is_rejoinder && header[i] == "of" && i + 1 < header.size()) {
            rule.rejoinder_of = std::string(header[++i]);
        } else {
            throw ParseError("unexpected '" + std::string(header[i]) + "' in rule header", line);
        }
    }
    if (is_rejoinder && !rule.rejoinder_of) throw ParseError("rejoinder needs 'of <parent-id>'", line);

    rule.pattern = parse_pattern(line_text.substr(colon + 1, arrow - colon - 1), lex, cfg, line);
    std::string_view tail = line_text.substr(arrow + 2);
    std::size_t pos = tail.find_first_not_of(" \t");
    if (pos == std::string_view::npos) throw ParseError("missing response", line);
    rule.response = read_quoted(tail, pos, line);
    const auto wildcards = static_cast<std::size_t>(std::count_if(
        rule.pattern.begin(), rule.pattern.end(),
        [](const PatternAtom& a) { return a.kind == PatternAtom::Kind::wildcard; }));
    rule.memory_writes = parse_writes(tail.substr(pos), wildcards, line);
    return rule;
}

}  // namespace

RuleSet parse_rules(std::string_view text, const ConceptLexicon& lexicon, const NormalizerConfig& cfg) {
    std::vector<DialogueRule> rules;
    std::optional<Category> topic;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (line.starts_with("topic:")) {
            auto name = trim(line.substr(6));
            topic = parse_category(name);
            if (!topic) throw ParseError("unknown topic '" + std::string(name) + "'", line_no);
        } else if (line.starts_with("rule ") || line.starts_with("rejoinder ")) {
            if (!topic) throw ParseError("rule outside of a topic block", line_no);
            rules.push_back(parse_rule_line(line, *topic, lexicon, cfg, line_no));
        } else {
            throw ParseError("unrecognized line '" + std::string(line) + "'", line_no);
        }
        if (end == text.size()) break;
    }

    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& r : rules)
        if (!seen.emplace(r.id, r.line).second) throw ParseError("duplicate rule id " + r.id, r.line);
    for (const auto& r : rules)
        if (r.rejoinder_of && !seen.contains(*r.rejoinder_of))
            throw ParseError("rejoinder " + r.id + " refers to unknown rule " + *r.rejoinder_of, r.line);
    return RuleSet(std::move(rules));
}

RuleSet parse_rules(std::string_view text, const ConceptLexicon& lexicon) {
    return parse_rules(text, lexicon, NormalizerConfig{});
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool align(const std::vector<PatternAtom>& pattern, const std::vector<std::string>& tokens,
           std::size_t ai, std::size_t ti, std::vector<std::string>& captures) {
    if (ai == pattern.size()) return true;
    const PatternAtom& atom = pattern[ai];
    if (atom.kind != PatternAtom::Kind::wildcard)
        return ti < tokens.size() && atom.accepts(tokens[ti]) && align(pattern, tokens, ai + 1, ti + 1, captures);

    const std::size_t available = tokens.size() - ti;
    if (available < atom.min_gap) return false;
    const std::size_t capture_index = captures.size();
    captures.emplace_back();
    for (std::size_t k = std::min(atom.max_gap, available) + 1; k-- > atom.min_gap;) {
        std::vector<std::string> span(tokens.begin() + static_cast<std::ptrdiff_t>(ti),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(ti + k));
        captures[capture_index] = join_tokens(span);
        captures.resize(capture_index + 1);
        if (align(pattern, tokens, ai + 1, ti + k, captures)) return true;
    }
    captures.resize(capture_index);
    return false;
}

}  // namespace

std::optional<std::vector<std::string>> match_pattern(const std::vector<PatternAtom>& pattern,
                                                      const std::vector<std::string>& tokens) {
    if (tokens.empty() || pattern.empty()) return std::nullopt;
    std::vector<std::string> captures;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        captures.clear();
        if (align(pattern, tokens, 0, start, captures)) return captures;
    }
    return std::nullopt;
}

std::optional<std::string> render_template(std::string_view tmpl,
                                           const std::map<std::string, std::string>& slots) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '{') {
            out += tmpl[i];
            continue;
        }
        const auto close = tmpl.find('}', i);
        if (close == std::string_view::npos) {
            out += tmpl.substr(i);
            break;
        }
        auto it = slots.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it == slots.end()) return std::nullopt;
        out += it->second;
        i = close;
    }
    return out;
}

std::optional<RuleMatch> match(const RuleSet& rules, SessionMemory& mem,
                               const std::vector<std::string>& tokens) {
    if (tokens.empty()) return std::nullopt;

    std::vector<std::string> skipped;
    auto attempt = [&](std::size_t index, bool rejoinder) -> std::optional<RuleMatch> {
        const DialogueRule& rule = rules.rules()[index];
        auto captures = match_pattern(rule.pattern, tokens);
        if (!captures) return std::nullopt;
        auto slots = mem.slots;
        for (const auto& w : rule.memory_writes)
            slots[w.slot] = w.capture ? (*captures)[w.capture - 1] : w.value;
        auto response = render_template(rule.response, slots);
        if (!response) {
            skipped.push_back(rule.id);
            return std::nullopt;
        }
        mem.slots = std::move(slots);
        mem.last_rule = rule.id;
        mem.last_topic = rule.topic;
        mem.followup_open = true;
        return RuleMatch{rule.id, rule.topic, std::move(*response), std::move(*captures), rejoinder, skipped};
    };

    if (mem.followup_open && mem.last_rule)
        for (std::size_t i : rules.rejoinders_of(*mem.last_rule))
            if (auto m = attempt(i, true)) return m;
    for (std::size_t i : rules.scan_order())
        if (auto m = attempt(i, false)) return m;
    return std::nullopt;
}

}  // namespace vsp
