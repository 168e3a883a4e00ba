#include "vsp/embeddings.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "vsp/errors.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

VectorStore::VectorStore(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("vector dimension must be positive");
}

bool VectorStore::contains(std::string_view word) const { return vectors_.contains(std::string(word)); }

std::span<const double> VectorStore::lookup(std::string_view word) const {
    auto it = vectors_.find(std::string(word));
    if (it == vectors_.end()) return {};
    return it->second;
}

bool VectorStore::set(std::string word, std::vector<double> vec) {
    if (vec.size() != dim_)
        throw std::invalid_argument("vector for '" + word + "' has length " + std::to_string(vec.size()) +
                                    ", expected " + std::to_string(dim_));
    auto [it, inserted] = vectors_.insert_or_assign(std::move(word), std::move(vec));
    return inserted;
}

void VectorStore::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::vector<const std::string*> words;
    for (const auto& [w, v] : vectors_) words.push_back(&w);
    std::sort(words.begin(), words.end(), [](auto* a, auto* b) { return *a < *b; });
    out << vectors_.size() << ' ' << dim_ << '\n';
    char buf[32];
    for (const auto* w : words) {
        out << *w;
        for (double x : vectors_.at(*w)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::size_t parse_size(std::string_view s, std::size_t line) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("malformed header field '" + std::string(s) + "'", line);
    return static_cast<std::size_t>(std::stoull(std::string(s)));
}

double parse_component(std::string_view s, std::size_t line) {
    const std::string buf(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw ParseError("non-numeric component '" + buf + "'", line);
    return v;
}

}  // namespace

VectorStore parse_vectors(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line)) throw ParseError("missing header", 1);
    auto header = split_spaces(line);
    if (header.size() != 2) throw ParseError("header must be '<vocab_count> <dim>'", 1);
    const std::size_t count = parse_size(header[0], 1);
    const std::size_t dim = parse_size(header[1], 1);
    if (dim == 0) throw ParseError("dimension must be positive", 1);

    VectorStore store(dim);
    std::size_t rows = 0;
    while (next_line(line)) {
        auto fields = split_spaces(line);
        if (fields.empty()) continue;
        if (rows == count) throw ParseError("more rows than the header's vocab_count " + std::to_string(count), line_no);
        if (fields.size() != dim + 1)
            throw ParseError("row for '" + std::string(fields[0]) + "' has " + std::to_string(fields.size() - 1) +
                                 " components, expected " + std::to_string(dim),
                             line_no);
        std::vector<double> vec(dim);
        for (std::size_t i = 0; i < dim; ++i) vec[i] = parse_component(fields[i + 1], line_no);
        std::string word(fields[0]);
        if (!store.set(word, std::move(vec)))
            store.warnings().push_back("line " + std::to_string(line_no) + ": duplicate word '" + word +
                                       "', keeping the last vector");
        ++rows;
    }
    if (rows != count)
        throw ParseError("header announces " + std::to_string(count) + " rows, found " + std::to_string(rows),
                         line_no);
    return store;
}

VectorStore load_vectors(const std::filesystem::path& path) {
    try {
        return parse_vectors(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

double IdfTable::weight(std::string_view lemma) const {
    auto it = weights.find(std::string(lemma));
    return it == weights.end() ? default_weight : it->second;
}

IdfTable compute_idf(const std::vector<std::vector<std::string>>& corpus, IdfFormula formula) {
    if (corpus.empty()) throw std::invalid_argument("IDF needs a non-empty corpus");
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : corpus) {
        std::unordered_set<std::string_view> seen(doc.begin(), doc.end());
        for (auto w : seen) ++df[std::string(w)];
    }
    IdfTable idf;
    idf.n_docs = corpus.size();
    const double n = static_cast<double>(corpus.size());
    for (const auto& [w, count] : df) {
        const double d = static_cast<double>(count);
        idf.weights[w] = formula == IdfFormula::smoothed ? std::log((1.0 + n) / (1.0 + d)) + 1.0
                                                         : std::log(n / d);
    }
    idf.default_weight = formula == IdfFormula::smoothed ? std::log(1.0 + n) + 1.0 : std::log(n) + 1.0;
    return idf;
}

SentenceVector sentence_vector(const std::vector<std::string>& tokens, const VectorStore& store,
                               const IdfTable& idf) {
    SentenceVector out;
    out.v.assign(store.dim(), 0.0);
    for (const auto& t : tokens) {
        auto vec = store.lookup(t);
        if (vec.empty()) {
            out.oov.push_back(t);
            continue;
        }
        const double w = idf.weight(t);
        for (std::size_t i = 0; i < vec.size(); ++i) out.v[i] += w * vec[i];
        ++out.n_known;
    }
    return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("distance between vectors of different length");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw UndefinedDistance("cosine distance of a zero-norm vector");
    const double cos = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
    return 1.0 - cos;
}

double distance(const SentenceVector& a, const SentenceVector& b) { return distance(a.v, b.v); }

}  // namespace vsp
