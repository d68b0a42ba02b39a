#pragma once

#include <stdexcept>
#include <string>

namespace dms {

// Runtime breach of a numeric invariant (mass drift, support blow-up).
// The CLI maps this to exit code 4.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / stream failure.  CLI exit code 3.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; carries the offending position.  CLI exit code 2.
struct schema_error : std::runtime_error {
    long row;
    std::string column;
    schema_error(long row_, std::string column_, const std::string& what)
        : std::runtime_error("row " + std::to_string(row_) + ", column " + column_ + ": " + what),
          row(row_),
          column(std::move(column_)) {}
};

}  // namespace dms
