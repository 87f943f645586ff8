#pragma once

#include <stdexcept>
#include <string>

namespace twh {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-class input (bad symbol, bad arguments).
class InputError : public Error {
public:
    using Error::Error;
};

// The approximate inverse does not exist at this alpha.
class ResonanceError : public Error {
public:
    using Error::Error;
};

// Internal consistency check or numerical procedure failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace twh
