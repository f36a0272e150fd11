#ifndef MAHLER_LINALG_HPP
#define MAHLER_LINALG_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fields.hpp"

namespace mahler {

/// Dense row-major matrix over an exact field.
template <class F>
class Matrix {
public:
    using K = typename F::Scalar;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& aik = a(i, k);
                if (is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix sum shape mismatch");
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix apply shape mismatch");
        std::vector<K> r(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!is_zero((*this)(i, j))) r[i] += (*this)(i, j) * v[j];
        return r;
    }
    std::vector<K> apply_left(const std::vector<K>& v) const {
        if (v.size() != rows_) throw std::invalid_argument("matrix apply shape mismatch");
        std::vector<K> r(cols_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            if (is_zero(v[i])) continue;
            for (std::size_t j = 0; j < cols_; ++j) r[j] += v[i] * (*this)(i, j);
        }
        return r;
    }

private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<K> a_;
};

template <class F>
Matrix<F> transpose(const Matrix<F>& m) {
    Matrix<F> r(m.field(), m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
    return r;
}

/// Reduced row echelon form computed in place with exact arithmetic.
/// Returns the pivot column of each nonzero row; rank = pivots.size().
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && is_zero(m(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(row, j), m(sel, j));
        typename F::Scalar inv = m.field().one() / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col))) continue;
            auto f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
    return rref(m).size();
}

/// Basis of the right null space (column vectors), one per free column.
/// Kernel vectors set their free column to 1 and other free columns to 0.
template <class F>
std::vector<std::vector<typename F::Scalar>> nullspace(Matrix<F> m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<typename F::Scalar>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<typename F::Scalar> v(m.cols(), m.field().zero());
        v[free] = m.field().one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace mahler

#endif
