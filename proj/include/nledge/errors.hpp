#pragma once

#include <stdexcept>
#include <string>

namespace nledge {

// Input data violates a precondition (non-finite values, length mismatch, ...).
class invalid_input_error : public std::invalid_argument {
public:
    explicit invalid_input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Too few observations for the requested statistic.
class sample_too_small_error : public invalid_input_error {
public:
    explicit sample_too_small_error(const std::string& what) : invalid_input_error(what) {}
};

// Numerically degenerate input (constant column, collinear design, ...).
class degenerate_input_error : public invalid_input_error {
public:
    explicit degenerate_input_error(const std::string& what) : invalid_input_error(what) {}
};

// Caller broke an API contract (wrong matrix kind, mixed groups, ...).
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// Filesystem / environment failure (unreadable input, unwritable output).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nledge
