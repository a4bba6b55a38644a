#pragma once

#include <stdexcept>
#include <string>

namespace wilt {

// Parse, validation, and I/O failures. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failures such as a diverging fit. The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wilt
