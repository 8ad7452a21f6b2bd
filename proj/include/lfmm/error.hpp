#pragma once

#include <stdexcept>
#include <string>

namespace lfmm {

// Malformed or inconsistent input (files, configs, mismatched arguments).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A row of a tabular file could not be parsed or violates the row contract.
class FormatError : public InputError {
public:
    FormatError(const std::string& source, std::size_t row, const std::string& what)
        : InputError(source + ":" + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// A quantity is mathematically undefined for the given input
// (zero total weight, zero variance, unidentifiable fit, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace lfmm
