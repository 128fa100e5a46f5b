#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chronotopics {

/// Dense row-major matrix of doubles. Rows are the unit of meaning here
/// (one distribution per row), so access is mostly through row().
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Scales a row in place to sum to one. Returns false (and leaves the row
/// untouched) when the row sums to zero.
inline bool normalize_row(std::span<double> row) {
    double total = 0.0;
    for (double x : row) total += x;
    if (!(total > 0.0)) return false;
    for (double& x : row) x /= total;
    return true;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] > q[i] ? p[i] - q[i] : q[i] - p[i];
    return 0.5 * acc;
}

}  // namespace chronotopics
