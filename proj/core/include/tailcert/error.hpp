#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tailcert {

// All library failures derive from Error so callers (the CLI in particular)
// can map them onto exit codes with a single catch.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A threshold or index outside the support of the queried event.
class RangeError : public Error {
public:
    using Error::Error;
};

// A request that exceeds a documented size cap (e.g. exact mode above 4096).
class CapacityError : public Error {
public:
    using Error::Error;
};

// A parameter outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Unknown strategy id, suite name, family name, ...
class LookupError : public Error {
public:
    using Error::Error;
};

// Caller paired incompatible objects (e.g. a lower bound with an upper check).
class ContractError : public Error {
public:
    using Error::Error;
};

// A strategy broke the rules of the adaptive game.
class ProtocolViolation : public Error {
public:
    ProtocolViolation(std::size_t step, const std::string& what)
        : Error("protocol violation at step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace tailcert
