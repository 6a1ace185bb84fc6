#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace k3c {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

// Dense row-major matrix over an exact ring. Only what the lattice and
// monodromy code needs; no expression templates.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (auto const& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (auto const& x : r) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  T const& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  static Matrix from_columns(std::vector<std::vector<T>> const& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (auto const& x : data_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(Matrix const& a, Matrix const& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(Matrix const& a, Matrix const& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        T const& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(Matrix const& a, std::vector<T> const& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<T> r(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

  friend Matrix operator+(Matrix a, Matrix const& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, Matrix const& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator*(T const& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  std::vector<T> const& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(IntMatrix const& m);
RatVector to_rational(IntVector const& v);

// Block diagonal sum.
IntMatrix direct_sum(std::vector<IntMatrix> const& blocks);

Integer gcd_of(IntVector const& v);

// Scales a rational vector by the lcm of its denominators; the result is
// integral with the same direction.
IntVector clear_denominators(RatVector const& v);

// Fraction-free (Bareiss) determinant.
Integer determinant(IntMatrix const& m);

std::size_t rank(RatMatrix m);

// Columns form a Z-basis of {x in Z^n : m x = 0}. The basis is the tail of a
// unimodular transform, so the kernel lattice it spans is saturated.
IntMatrix integer_kernel(IntMatrix const& m);

// Z-basis (as columns) of (span_Q of the columns of gens) ∩ Z^n.
IntMatrix saturate_columns(IntMatrix const& gens);

// Nonzero diagonal of the Smith normal form, in divisibility order.
std::vector<Integer> elementary_divisors(IntMatrix m);

// Unique solution of b * y = x when b has full column rank and x lies in the
// column span; nullopt otherwise.
std::optional<RatVector> solve_full_column_rank(RatMatrix const& b, RatVector const& x);

// Unimodular w (with inverse) mapping the primitive column c to e_0.
struct UnimodularPair {
  IntMatrix forward;
  IntMatrix inverse;
};
UnimodularPair unimodular_to_first_basis_vector(IntVector const& c);

// Inertia of a symmetric rational form by congruence diagonalization.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};
Inertia symmetric_inertia(RatMatrix form);

std::string to_string(Rational const& q);
Rational parse_rational(std::string const& text);

}  // namespace k3c
