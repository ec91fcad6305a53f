#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

#include "nsfd/errors.hpp"

namespace nsfd {

using Complex = std::complex<double>;

// Small dense square matrix, row-major. Entries must be finite.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) throw UsageError("matrix order must be positive");
    }

    SquareMatrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
        if (n == 0) throw UsageError("matrix order must be positive");
        if (a_.size() != n * n) {
            std::ostringstream msg;
            msg << "matrix of order " << n << " needs " << n * n << " entries, got " << a_.size();
            throw UsageError(msg.str());
        }
        for (double x : a_) {
            if (!std::isfinite(x)) throw UsageError("matrix entry is not finite");
        }
    }

    static SquareMatrix identity(std::size_t n) {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t order() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    const std::vector<double>& entries() const { return a_; }

private:
    std::size_t n_;
    std::vector<double> a_;
};

} // namespace nsfd
