#pragma once

#include "wittrace/algebra.hpp"

namespace wittrace {

/// Matrix with entries in a FinAlgebra (entry = coordinate vector).
/// Row-major; entries kept reduced.
class AlgMat {
  public:
    AlgMat() = default;
    AlgMat(FinAlgebra ring, std::size_t rows, std::size_t cols)
        : ring_(std::move(ring)),
          rows_(rows),
          cols_(cols),
          entries_(rows * cols, std::vector<Int>(ring_.rank(), Int(0))) {}

    static AlgMat identity(const FinAlgebra& ring, std::size_t n) {
        AlgMat m(ring, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring.one();
        return m;
    }

    const FinAlgebra& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::vector<Int>& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const std::vector<Int>& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::vector<Int> v) { entries_[i * cols_ + j] = ring_.reduce(std::move(v)); }

    AlgMat operator*(const AlgMat& o) const {
        AlgMat r(ring_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (ring_.additive().is_zero_element(at(i, k))) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + ring_.multiply(at(i, k), o.at(k, j));
            }
        r.reduce_entries();
        return r;
    }
    AlgMat operator+(const AlgMat& o) const {
        AlgMat r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = r.entries_[i] + o.entries_[i];
        r.reduce_entries();
        return r;
    }
    AlgMat operator-(const AlgMat& o) const {
        AlgMat r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = r.entries_[i] - o.entries_[i];
        r.reduce_entries();
        return r;
    }

    bool congruent(const AlgMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (ring_.reduce(entries_[i]) != ring_.reduce(o.entries_[i])) return false;
        return true;
    }
    bool is_zero() const {
        for (const auto& e : entries_)
            if (!ring_.additive().is_zero_element(e)) return false;
        return true;
    }

    AlgMat transpose() const {
        AlgMat r(ring_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::vector<Int> trace() const {
        std::vector<Int> t(ring_.rank());
        for (std::size_t i = 0; i < rows_; ++i) t = t + at(i, i);
        return ring_.reduce(t);
    }

    /// Z-matrix of v ↦ A·v on stacked column coordinates of S^cols
    /// (slot i occupies indices [i*rank, (i+1)*rank)).
    IntMat column_operator() const {
        const std::size_t k = ring_.rank();
        IntMat out(rows_ * k, cols_ * k);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                IntMat block = ring_.left_multiplication(at(i, j));
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) out(i * k + a, j * k + b) = block(a, b);
            }
        return out;
    }

    /// Z-matrix of w ↦ w·A on stacked row coordinates of S^rows.
    IntMat row_operator() const {
        const std::size_t k = ring_.rank();
        IntMat out(cols_ * k, rows_ * k);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                IntMat block = ring_.right_multiplication(at(i, j));
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) out(j * k + a, i * k + b) = block(a, b);
            }
        return out;
    }

  private:
    void reduce_entries() {
        for (auto& e : entries_) e = ring_.reduce(std::move(e));
    }

    FinAlgebra ring_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::vector<Int>> entries_;
};

}  // namespace wittrace
