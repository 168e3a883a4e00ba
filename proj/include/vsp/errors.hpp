#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vsp {

/// Malformed input file; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

    /// Same error, message prefixed with the file it came from.
    static ParseError in_file(const std::string& file, const ParseError& inner);

private:
    std::size_t line_;
};

/// Cosine distance requested on a zero-norm operand.
class UndefinedDistance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AmbiguityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vsp
