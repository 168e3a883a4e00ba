#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vsp {

// Encoding is stable: values are written to archives and traces.
enum class Category : int {
    consultation_subject = 0,
    personal = 1,
    medical_history = 2,
    symptoms = 3,
    lifestyle = 4,
    treatment = 5,
    unknown = 6,
};

inline constexpr std::size_t kCategoryCount = 7;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::consultation_subject, Category::personal, Category::medical_history,
    Category::symptoms,             Category::lifestyle, Category::treatment,
    Category::unknown,
};

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);

}  // namespace vsp
