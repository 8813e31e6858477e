#pragma once

#include <stdexcept>
#include <string>

namespace trendcast {

/// Bad input, bad flag combination or a violated precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file or network resource could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent row in one of the corpus input files.
class IngestError : public ValidationError {
public:
    IngestError(std::string file, std::size_t line, std::size_t column, const std::string& what)
        : ValidationError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          file_(std::move(file)), line_(line), column_(column) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

}  // namespace trendcast
