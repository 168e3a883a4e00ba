#include "vsp/errors.hpp"

namespace vsp {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ParseError ParseError::in_file(const std::string& file, const ParseError& inner) {
    ParseError e(file + ": " + inner.what());
    e.line_ = inner.line_;
    return e;
}

}  // namespace vsp
