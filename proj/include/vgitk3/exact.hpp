#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vgitk3 {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

class SingularMatrixError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_)
                throw std::invalid_argument("ragged matrix literal");
            for (const auto& x : r)
                data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        std::size_t c = rows.empty() ? 0 : rows.front().size();
        Matrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c)
                throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t nrows) {
        Matrix m(nrows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != nrows)
                throw std::invalid_argument("ragged matrix columns");
            for (std::size_t i = 0; i < nrows; ++i)
                m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool symmetric() const {
        if (!square())
            return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i))
                    return false;
        return true;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix shape mismatch in product");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0)
                    continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if (cols_ != v.size())
            throw std::invalid_argument("matrix/vector shape mismatch");
        std::vector<T> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r[i] += (*this)(i, j) * v[j];
        return r;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    const std::vector<T>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);
// Throws std::invalid_argument if some entry is not an integer.
IntMatrix to_integer(const RatMatrix& m);
IntVector to_integer(const RatVector& v);

Rational dot(const RatVector& a, const RatVector& b);
Integer dot(const IntVector& a, const IntVector& b);
// x^T G y
Rational bilinear(const RatMatrix& g, const RatVector& x, const RatVector& y);
Integer bilinear(const IntMatrix& g, const IntVector& x, const IntVector& y);

Integer content(const IntVector& v);
IntVector primitive(const IntVector& v);
Integer lcm_of_denominators(const RatVector& v);

struct Signature {
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t zero = 0;
    bool operator==(const Signature&) const = default;
};

Signature signature(const RatMatrix& g);
Signature signature(const IntMatrix& g);

Integer determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

RatMatrix rational_inverse(const RatMatrix& m);
RatMatrix rational_inverse(const IntMatrix& m);
IntMatrix unimodular_inverse(const IntMatrix& m);

// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i >= 0.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    std::vector<Integer> diagonal() const;
};
SmithForm snf(const IntMatrix& a);

// U * A = H, U unimodular, H in row echelon form with positive pivots and the
// entries above each pivot reduced into [0, pivot). Zero rows come last.
struct HermiteForm {
    IntMatrix H;
    IntMatrix U;
    std::size_t rank = 0;
};
HermiteForm hnf_rows(const IntMatrix& a);

// Canonical basis (rows) of the lattice generated by the rows of a.
IntMatrix lattice_basis_rows(const IntMatrix& a);

// Saturated basis of {x in Z^n : A x = 0}, returned as the rows of an HNF.
std::vector<IntVector> integer_kernel(const IntMatrix& a);

// Unimodular matrix whose first column is v. v must be primitive.
IntMatrix complete_to_basis(const IntVector& v);

// Some x in Z^n with a . x = m, or nullopt when gcd(a) does not divide m.
std::optional<IntVector> solve_row(const IntVector& a, const Integer& m);

// LLL-reduce a positive definite integral Gram matrix. Returns T unimodular with
// T^T G T reduced (columns of T are the new basis).
IntMatrix lll_transform(const IntMatrix& gram);

// Exact phase-1 simplex with Bland's rule.
bool hull_contains(const std::vector<RatVector>& points, const RatVector& q);

std::string to_string(const Rational& q);
// num/den in lowest terms.
Rational ratio(const Integer& num, const Integer& den);
Rational parse_rational(const std::string& s);

}  // namespace vgitk3
