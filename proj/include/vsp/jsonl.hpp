#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string_view>

#include <nlohmann/json.hpp>

namespace vsp {

/// Calls `fn(object, line_number)` for every non-blank line. Throws
/// ParseError naming the line on invalid JSON or a non-object value.
void for_each_jsonl(std::string_view text, const std::function<void(const nlohmann::json&, std::size_t)>& fn);
void for_each_jsonl_file(const std::filesystem::path& path,
                         const std::function<void(const nlohmann::json&, std::size_t)>& fn);

}  // namespace vsp
