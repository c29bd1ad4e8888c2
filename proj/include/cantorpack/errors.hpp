#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cantorpack {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. x not in [0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed object: digit out of range, bad rule, bad probability vector.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Operands built over different base sequences.
class MismatchError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Requested rank is beyond the exact-arithmetic budget or the available base prefix.
class ResolutionExceeded : public Error {
public:
    ResolutionExceeded(const std::string& what, std::size_t deepest_rank)
        : Error(what), deepest_rank_(deepest_rank) {}

    std::size_t deepest_rank() const noexcept { return deepest_rank_; }

private:
    std::size_t deepest_rank_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cantorpack
