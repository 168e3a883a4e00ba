#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace vsp {

enum class Label { coherent, incoherent, not_recognized };

std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

struct AnnotatedTurn {
    std::string question;
    std::string system_response;
    Label label = Label::not_recognized;
};

/// Rates and derived scores, all in percent.
struct EvalReport {
    std::size_t n = 0;
    std::size_t coherent = 0;
    std::size_t incoherent = 0;
    std::size_t not_recognized = 0;
    double crr = 0.0;
    double irr = 0.0;
    double nrr = 0.0;
    std::optional<double> precision;  // undefined when nothing was answered
    double recall = 0.0;
    std::optional<double> f1;

    nlohmann::json to_json() const;
};

/// Throws std::invalid_argument on an empty transcript.
EvalReport score(const std::vector<AnnotatedTurn>& turns);

/// Precision, recall and F1 from rates already expressed in percent.
EvalReport score_rates(double crr, double irr, double nrr);

std::vector<AnnotatedTurn> parse_transcript(std::string_view jsonl);
std::vector<AnnotatedTurn> load_transcript(const std::filesystem::path& path);

using NamedReport = std::pair<std::string, EvalReport>;

/// Aligned columns: System, CRR, IRR, NRR, Precision, Recall, F1 (2 decimals).
std::string render_table(const std::vector<NamedReport>& rows);

struct Comparison {
    std::string system;
    std::string baseline;
    std::optional<double> f1_delta;         // absolute, in points
    std::optional<double> error_reduction;  // relative reduction of (100 - F1), percent
};

/// Every row after the first against the first.
std::vector<Comparison> compare_to_baseline(const std::vector<NamedReport>& rows);

nlohmann::json comparison_report(const std::vector<NamedReport>& rows);

}  // namespace vsp
