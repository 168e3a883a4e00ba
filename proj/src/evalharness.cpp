#include "vsp/evalharness.hpp"

#include <cstdio>
#include <stdexcept>

#include "vsp/errors.hpp"
#include "vsp/jsonl.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

using nlohmann::json;

std::string_view to_string(Label l) {
    switch (l) {
        case Label::coherent: return "coherent";
        case Label::incoherent: return "incoherent";
        case Label::not_recognized: return "not_recognized";
    }
    return "not_recognized";
}

std::optional<Label> parse_label(std::string_view s) {
    if (s == "coherent") return Label::coherent;
    if (s == "incoherent") return Label::incoherent;
    if (s == "not_recognized") return Label::not_recognized;
    return std::nullopt;
}

namespace {

void derive_scores(EvalReport& r) {
    const double answered = r.crr + r.irr;
    r.recall = r.crr;
    if (answered > 0.0) {
        r.precision = 100.0 * r.crr / answered;
        const double p = *r.precision;
        r.f1 = p + r.recall > 0.0 ? 2.0 * p * r.recall / (p + r.recall) : 0.0;
    } else {
        r.precision.reset();
        r.f1.reset();
    }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

EvalReport score(const std::vector<AnnotatedTurn>& turns) {
    if (turns.empty()) throw std::invalid_argument("cannot score an empty transcript");
    EvalReport r;
    r.n = turns.size();
    for (const auto& t : turns) {
        switch (t.label) {
            case Label::coherent: ++r.coherent; break;
            case Label::incoherent: ++r.incoherent; break;
            case Label::not_recognized: ++r.not_recognized; break;
        }
    }
    const double n = static_cast<double>(r.n);
    r.crr = 100.0 * static_cast<double>(r.coherent) / n;
    r.irr = 100.0 * static_cast<double>(r.incoherent) / n;
    r.nrr = 100.0 * static_cast<double>(r.not_recognized) / n;
    derive_scores(r);
    return r;
}

EvalReport score_rates(double crr, double irr, double nrr) {
    EvalReport r;
    r.crr = crr;
    r.irr = irr;
    r.nrr = nrr;
    derive_scores(r);
    return r;
}

json EvalReport::to_json() const {
    return {{"n", n},
            {"counts", {{"coherent", coherent}, {"incoherent", incoherent}, {"not_recognized", not_recognized}}},
            {"crr", crr},
            {"irr", irr},
            {"nrr", nrr},
            {"precision", optional_number(precision)},
            {"recall", recall},
            {"f1", optional_number(f1)}};
}

std::vector<AnnotatedTurn> parse_transcript(std::string_view jsonl) {
    std::vector<AnnotatedTurn> out;
    for_each_jsonl(jsonl, [&](const json& j, std::size_t line) {
        AnnotatedTurn t;
        t.question = j.at("question").get<std::string>();
        t.system_response = j.at("system_response").get<std::string>();
        if (!j.contains("label") || j.at("label").is_null()) throw ParseError("turn has no label", line);
        const auto name = j.at("label").get<std::string>();
        const auto label = parse_label(name);
        if (!label) throw ParseError("unknown label '" + name + "'", line);
        t.label = *label;
        out.push_back(std::move(t));
    });
    return out;
}

std::vector<AnnotatedTurn> load_transcript(const std::filesystem::path& path) {
    try {
        return parse_transcript(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

std::string render_table(const std::vector<NamedReport>& rows) {
    const std::vector<std::string> headers = {"System", "CRR", "IRR", "NRR", "Precision", "Recall", "F1"};
    std::vector<std::vector<std::string>> cells;
    auto fmt = [](std::optional<double> v) {
        if (!v) return std::string("n/a");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", *v);
        return std::string(buf);
    };
    for (const auto& [name, r] : rows)
        cells.push_back({name, fmt(r.crr), fmt(r.irr), fmt(r.nrr), fmt(r.precision), fmt(r.recall), fmt(r.f1)});

    std::vector<std::size_t> width(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        width[c] = headers[c].size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::size_t pad = width[c] - row[c].size();
            if (c == 0) {
                out += row[c] + std::string(pad, ' ');
            } else {
                out += "  " + std::string(pad, ' ') + row[c];
            }
        }
        out += '\n';
    };
    emit(headers);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    for (const auto& row : cells) emit(row);
    return out;
}

std::vector<Comparison> compare_to_baseline(const std::vector<NamedReport>& rows) {
    std::vector<Comparison> out;
    if (rows.empty()) return out;
    const auto& [base_name, base] = rows.front();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        Comparison c;
        c.system = rows[i].first;
        c.baseline = base_name;
        const auto& f1 = rows[i].second.f1;
        if (f1 && base.f1) {
            c.f1_delta = *f1 - *base.f1;
            const double base_error = 100.0 - *base.f1;
            if (base_error > 0.0) c.error_reduction = 100.0 * (base_error - (100.0 - *f1)) / base_error;
        }
        out.push_back(std::move(c));
    }
    return out;
}

json comparison_report(const std::vector<NamedReport>& rows) {
    json systems = json::array();
    for (const auto& [name, r] : rows) {
        json entry = r.to_json();
        entry["system"] = name;
        systems.push_back(std::move(entry));
    }
    json comparisons = json::array();
    for (const auto& c : compare_to_baseline(rows))
        comparisons.push_back({{"system", c.system},
                               {"baseline", c.baseline},
                               {"f1_delta", optional_number(c.f1_delta)},
                               {"error_reduction", optional_number(c.error_reduction)}});
    return {{"schema_version", 1}, {"systems", systems}, {"comparisons", comparisons}};
}

}  // namespace vsp
