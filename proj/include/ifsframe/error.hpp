#pragma once

#include <stdexcept>
#include <string>

namespace ifsframe {

// Every library failure derives from Error so callers (the CLI in particular)
// can report a machine-readable kind alongside the message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Argument outside the mathematical domain of an operation (negative weight,
// R <= 1, point outside an attractor, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// Malformed call: mismatched lengths, too few radii, bad CLI flags.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("usage_error", what) {}
};

// The operation is defined but refused for this input, e.g. cylinder algebra
// on a system whose digits collide mod R.
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error("unsupported_error", what) {}
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& what) : Error("size_error", what) {}
};

} // namespace ifsframe
