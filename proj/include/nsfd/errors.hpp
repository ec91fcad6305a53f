#pragma once

#include <stdexcept>
#include <string>

namespace nsfd {

// Invalid configuration or misuse of an interface: bad parameters, dimension
// mismatches, preconditions violated by the caller.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown at run time: non-finite values, singular systems,
// iteration budgets exhausted. Expected for divergent schemes; callers that
// integrate trajectories catch this and record it instead of crashing.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nsfd
