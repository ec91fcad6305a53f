#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "nsfd/errors.hpp"

namespace nsfd {

// Dense real state vector. Entries are checked for finiteness on
// construction; NaN or infinity is rejected as a usage error.
class StateVector {
public:
    StateVector() = default;

    StateVector(std::initializer_list<double> xs) : v_(xs) { validate(); }

    explicit StateVector(std::vector<double> xs) : v_(std::move(xs)) { validate(); }

    static StateVector zeros(std::size_t n) { return StateVector(std::vector<double>(n, 0.0)); }

    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }

    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    const std::vector<double>& raw() const { return v_; }

private:
    void validate() const {
        for (double x : v_) {
            if (!std::isfinite(x)) {
                std::ostringstream msg;
                msg << "state vector entry is not finite: " << x;
                throw UsageError(msg.str());
            }
        }
    }

    std::vector<double> v_;
};

inline bool operator==(const StateVector& a, const StateVector& b) { return a.raw() == b.raw(); }

inline double inf_norm(const StateVector& y) {
    double n = 0.0;
    for (double x : y) n = std::max(n, std::abs(x));
    return n;
}

inline double inf_norm(const std::vector<double>& y) {
    double n = 0.0;
    for (double x : y) n = std::max(n, std::abs(x));
    return n;
}

// Distance in the infinity norm; vectors must have equal length.
inline double inf_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("inf_distance: dimension mismatch");
    double n = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) n = std::max(n, std::abs(a[i] - b[i]));
    return n;
}

inline double inf_distance(const StateVector& a, const StateVector& b) {
    return inf_distance(std::span<const double>(a.raw()), std::span<const double>(b.raw()));
}

} // namespace nsfd
