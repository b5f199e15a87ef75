#pragma once

#include <stdexcept>
#include <string>

namespace oriflag {

// Malformed textual or JSON input (FlagSpec syntax, space names, number lists).
class ParseError : public std::invalid_argument {
public:
    explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well-formed but names a space or mode the library does not handle.
class UnsupportedError : public std::domain_error {
public:
    explicit UnsupportedError(const std::string& what) : std::domain_error(what) {}
};

// An adaptive numerical routine ran out of its evaluation budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oriflag
