#include "vsp/category.hpp"

namespace vsp {

namespace {
constexpr std::array<std::string_view, kCategoryCount> kNames = {
    "consultation_subject", "personal", "medical_history", "symptoms",
    "lifestyle",            "treatment", "unknown",
};
}  // namespace

std::string_view to_string(Category c) { return kNames.at(index_of(c)); }

std::optional<Category> parse_category(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return static_cast<Category>(i);
    return std::nullopt;
}

}  // namespace vsp
