#pragma once

#include "wittrace/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace wittrace {

/// Dense matrix over Z. Row-major storage; rows or cols may be zero
/// (maps into or out of the zero group are everywhere legal).
class IntMat {
  public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMat(std::initializer_list<std::initializer_list<Int>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::runtime_error("IntMat: ragged initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMat zero(std::size_t rows, std::size_t cols) { return IntMat(rows, cols); }
    static IntMat diagonal(const std::vector<Int>& d) {
        IntMat m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static IntMat from_column(const std::vector<Int>& v) {
        IntMat m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const IntMat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    IntMat transpose() const {
        IntMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_) throw std::runtime_error("IntMat: dimension mismatch in product");
        IntMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<Int> operator*(const std::vector<Int>& v) const {
        if (cols_ != v.size()) throw std::runtime_error("IntMat: dimension mismatch in apply");
        std::vector<Int> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (v[j] != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    IntMat operator+(const IntMat& o) const {
        require_same_shape(o, "sum");
        IntMat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    IntMat operator-(const IntMat& o) const {
        require_same_shape(o, "difference");
        IntMat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }
    IntMat operator-() const {
        IntMat r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    IntMat operator*(const Int& c) const {
        IntMat r = *this;
        for (auto& x : r.data_) x *= c;
        return r;
    }

    std::vector<Int> column(std::size_t j) const {
        std::vector<Int> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<Int> row(std::size_t i) const {
        std::vector<Int> v(cols_);
        for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
        return v;
    }
    void set_column(std::size_t j, const std::vector<Int>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    /// Horizontal concatenation [A | B].
    static IntMat hstack(const IntMat& a, const IntMat& b) {
        if (a.rows() != b.rows()) throw std::runtime_error("IntMat: hstack row mismatch");
        IntMat r(a.rows(), a.cols() + b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
        }
        return r;
    }

    static IntMat block_diag(const IntMat& a, const IntMat& b) {
        IntMat r(a.rows() + b.rows(), a.cols() + b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
        return r;
    }

    /// Kronecker product; index (i,j) of the result pairs row-major, first
    /// factor outer. Matches the tensor-generator indexing used throughout.
    static IntMat kronecker(const IntMat& a, const IntMat& b) {
        IntMat r(a.rows() * b.rows(), a.cols() * b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                if (a(i, j) == 0) continue;
                for (std::size_t k = 0; k < b.rows(); ++k)
                    for (std::size_t l = 0; l < b.cols(); ++l)
                        r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
            }
        return r;
    }

    IntMat submatrix_rows(const std::vector<std::size_t>& keep) const {
        IntMat r(keep.size(), cols_);
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(keep[i], j);
        return r;
    }
    IntMat submatrix_cols(const std::vector<std::size_t>& keep) const {
        IntMat r(rows_, keep.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) r(i, j) = (*this)(i, keep[j]);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMat& m) {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
        }
        return os << "]";
    }

  private:
    void require_same_shape(const IntMat& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::runtime_error(std::string("IntMat: shape mismatch in ") + what);
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

inline std::vector<Int> operator+(std::vector<Int> a, const std::vector<Int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline std::vector<Int> operator-(std::vector<Int> a, const std::vector<Int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline std::vector<Int> operator*(const Int& c, std::vector<Int> a) {
    for (auto& x : a) x *= c;
    return a;
}

}  // namespace wittrace
