#pragma once

#include <stdexcept>
#include <string>

namespace mfh {

// Exit-code classes used by the command line front end:
// UsageError -> 1, DataError -> 2, NumericalError -> 3.

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mfh
