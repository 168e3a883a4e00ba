#include "vsp/normalizer.hpp"

#include <fstream>
#include <sstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "vsp/errors.hpp"

namespace vsp {

namespace {

bool is_punct_or_symbol(UChar32 c) {
    return (U_GET_GC_MASK(c) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

std::vector<std::string> split_whitespace(const icu::UnicodeString& text) {
    std::vector<std::string> out;
    icu::UnicodeString current;
    auto flush = [&] {
        if (!current.isEmpty()) {
            std::string utf8;
            current.toUTF8String(utf8);
            out.push_back(std::move(utf8));
            current.remove();
        }
    };
    for (int32_t i = 0; i < text.length();) {
        const UChar32 c = text.char32At(i);
        if (u_isUWhiteSpace(c))
            flush();
        else
            current.append(c);
        i += U16_LENGTH(c);
    }
    flush();
    return out;
}

icu::UnicodeString fold_unicode(std::string_view raw) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    icu::UnicodeString text =
        icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    if (U_SUCCESS(status)) {
        icu::UnicodeString composed = nfc->normalize(text, status);
        if (U_SUCCESS(status)) text = std::move(composed);
    }
    text.toLower(icu::Locale::getRoot());
    // Lowercasing can decompose (e.g. U+0130), so compose once more.
    status = U_ZERO_ERROR;
    if (nfc) {
        icu::UnicodeString composed = nfc->normalize(text, status);
        if (U_SUCCESS(status)) text = std::move(composed);
    }
    icu::UnicodeString stripped;
    for (int32_t i = 0; i < text.length();) {
        const UChar32 c = text.char32At(i);
        stripped.append(is_punct_or_symbol(c) ? UChar32{' '} : c);
        i += U16_LENGTH(c);
    }
    return stripped;
}

std::string canonical_key(std::string_view s, std::size_t line) {
    auto parts = split_whitespace(fold_unicode(s));
    if (parts.size() != 1)
        throw ParseError("entry '" + std::string(s) + "' must be a single token", line);
    return parts.front();
}

template <typename Fn>
void for_each_content_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos) {
            line = line.substr(first);
            line = line.substr(0, line.find_last_not_of(" \t") + 1);
            fn(line, line_no);
        }
        if (end == text.size()) break;
        pos = end + 1;
    }
}

}  // namespace

std::string fold_text(std::string_view raw) {
    std::string out;
    fold_unicode(raw).toUTF8String(out);
    return out;
}

NormalizedUtterance normalize(std::string_view raw, const NormalizerConfig& cfg) {
    NormalizedUtterance out;
    out.raw = std::string(raw);
    for (std::string& token : split_whitespace(fold_unicode(raw))) {
        if (auto it = cfg.spell_map.find(token); it != cfg.spell_map.end()) token = it->second;
        if (auto it = cfg.lemma_map.find(token); it != cfg.lemma_map.end()) token = it->second;
        if (cfg.stopwords.contains(token)) continue;
        out.tokens.push_back(std::move(token));
        if (out.tokens.size() == cfg.max_len) break;
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

void NormalizerConfig::validate() const {
    auto is_single_token = [](const std::string& s) {
        auto parts = split_whitespace(fold_unicode(s));
        return parts.size() == 1 && parts.front() == s;
    };
    for (const auto& w : stopwords)
        if (!is_single_token(w)) throw ParseError("stopword '" + w + "' is not a normalized token");
    for (const auto& [from, to] : lemma_map) {
        if (!is_single_token(from) || !is_single_token(to))
            throw ParseError("lemma entry '" + from + "' -> '" + to + "' is not a normalized token pair");
        if (auto it = lemma_map.find(to); it != lemma_map.end() && it->second != to)
            throw ParseError("lemma '" + to + "' is not a fixed point of the lemma map");
        if (spell_map.contains(to))
            throw ParseError("lemma '" + to + "' is also a spelling-map key");
    }
    for (const auto& [from, to] : spell_map) {
        if (!is_single_token(from) || !is_single_token(to))
            throw ParseError("spelling entry '" + from + "' -> '" + to + "' is not a normalized token pair");
        if (spell_map.contains(to) && to != from)
            throw ParseError("spelling correction '" + to + "' is itself a spelling-map key");
    }
    if (max_len == 0) throw ParseError("max_len must be positive");
}

std::unordered_set<std::string> parse_stopwords(std::string_view text) {
    std::unordered_set<std::string> out;
    for_each_content_line(text, [&](std::string_view line, std::size_t no) {
        out.insert(canonical_key(line, no));
    });
    return out;
}

std::unordered_map<std::string, std::string> parse_mapping(std::string_view text) {
    std::unordered_map<std::string, std::string> out;
    for_each_content_line(text, [&](std::string_view line, std::size_t no) {
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw ParseError("expected 'surface<TAB>replacement'", no);
        auto key = canonical_key(line.substr(0, tab), no);
        auto value = canonical_key(line.substr(tab + 1), no);
        if (!out.emplace(key, value).second) throw ParseError("duplicate entry '" + key + "'", no);
    });
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NormalizerConfig load_normalizer_config(const std::filesystem::path& stopwords,
                                        const std::filesystem::path& lemmas,
                                        const std::filesystem::path& spelling) {
    NormalizerConfig cfg;
    auto with_path = [](const std::filesystem::path& p, auto&& parse) {
        try {
            return parse(read_file(p));
        } catch (const ParseError& e) {
            throw ParseError::in_file(p.string(), e);
        }
    };
    cfg.stopwords = with_path(stopwords, parse_stopwords);
    cfg.lemma_map = with_path(lemmas, parse_mapping);
    cfg.spell_map = with_path(spelling, parse_mapping);
    cfg.validate();
    return cfg;
}

}  // namespace vsp
