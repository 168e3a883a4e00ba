#include "vsp/jsonl.hpp"

#include "vsp/errors.hpp"
#include "vsp/normalizer.hpp"

namespace vsp {

void for_each_jsonl(std::string_view text, const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!j.is_object()) throw ParseError("expected a JSON object", line_no);
        try {
            fn(j, line_no);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no);
        }
    }
}

void for_each_jsonl_file(const std::filesystem::path& path,
                         const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    try {
        for_each_jsonl(read_file(path), fn);
    } catch (const ParseError& e) {
        throw ParseError::in_file(path.string(), e);
    }
}

}  // namespace vsp
