#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gda {

/// Broad failure class; the CLI maps these onto exit codes.
enum class ErrorKind {
    input,       // malformed or inconsistent input (exit 2)
    degenerate,  // numerically degenerate data for the requested analysis (exit 3)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

/// Raised by a strict fit when the table has empty rows or columns.
class DegenerateTableError : public DegenerateError {
public:
    DegenerateTableError(std::vector<std::string> zero_rows, std::vector<std::string> zero_cols);

    const std::vector<std::string>& zero_rows() const noexcept { return zero_rows_; }
    const std::vector<std::string>& zero_cols() const noexcept { return zero_cols_; }

private:
    std::vector<std::string> zero_rows_;
    std::vector<std::string> zero_cols_;
};

}  // namespace gda
