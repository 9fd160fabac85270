#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyreg/errors.hpp"

namespace polyreg {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Dense vector of exact rationals; its length is the ambient dimension.
using RatVector = std::vector<Rational>;

inline int sign(const Rational& r) { return r.sign(); }

/// Parses "p/q", "p" or a finite decimal such as "-0.25".
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> Integer {
    s = trim(s);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) throw UsageError("malformed rational: '" + std::string(s) + "'");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw UsageError("malformed rational: '" + std::string(s) + "'");
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return Integer(digits);
  };
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_int(text.substr(0, slash));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) throw UsageError("rational with zero denominator");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    std::string whole(text.substr(0, dot));
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    Integer scale = 1;
    for (char c : frac) {
      if (c < '0' || c > '9') throw UsageError("malformed rational: '" + std::string(text) + "'");
      scale *= 10;
    }
    bool negative = !whole.empty() && whole[0] == '-';
    Integer ip = parse_int(whole);
    Integer fp = frac.empty() ? Integer(0) : parse_int(frac);
    Rational mag = Rational(boost::multiprecision::abs(ip)) + Rational(fp, scale);
    return negative ? Rational(-mag) : mag;
  }
  return Rational(parse_int(text));
}

inline std::string to_string(const Rational& r) {
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline RatVector make_vector(std::initializer_list<long> values) {
  RatVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

inline RatVector zeros(std::size_t n) { return RatVector(n, Rational(0)); }

inline RatVector unit_vector(std::size_t n, std::size_t i) {
  RatVector v = zeros(n);
  v.at(i) = 1;
  return v;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw UsageError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVector operator+(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw UsageError("vector add: dimension mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVector operator-(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw UsageError("vector sub: dimension mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVector operator-(const RatVector& a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline RatVector operator*(const Rational& s, const RatVector& a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline Rational squared_norm(const RatVector& v) { return dot(v, v); }

/// Scales v to the primitive integer vector on the same ray (gcd of entries 1).
inline RatVector primitive(const RatVector& v) {
  Integer lcm_den = 1;
  for (const auto& x : v) {
    if (x == 0) continue;
    lcm_den = boost::multiprecision::lcm(lcm_den, Integer(boost::multiprecision::denominator(x)));
  }
  Integer g = 0;
  for (const auto& x : v) {
    if (x == 0) continue;
    Integer scaled = boost::multiprecision::numerator(x) * (lcm_den / boost::multiprecision::denominator(x));
    g = boost::multiprecision::gcd(g, Integer(boost::multiprecision::abs(scaled)));
  }
  if (g == 0) return v;
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * Rational(lcm_den, g);
  return r;
}

inline std::string to_string(const RatVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

/// Row-major dense rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
  RatMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw UsageError("RatMatrix: ragged initializer");
      for (long x : row) data_.emplace_back(x);
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
    RatMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw UsageError("RatMatrix::from_rows: dimension mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static RatMatrix from_columns(const std::vector<RatVector>& cols, std::size_t rows) {
    RatMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw UsageError("RatMatrix::from_columns: dimension mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] RatVector row(std::size_t i) const {
    return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  [[nodiscard]] RatVector col(std::size_t j) const {
    RatVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  [[nodiscard]] RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  RatVector operator*(const RatVector& x) const {
    if (x.size() != cols_) throw UsageError("matrix-vector product: dimension mismatch");
    RatVector y(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0 && x[j] != 0) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  RatMatrix operator*(const RatMatrix& other) const {
    if (cols_ != other.rows_) throw UsageError("matrix product: dimension mismatch");
    RatMatrix p(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if ((*this)(i, k) == 0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) p(i, j) += (*this)(i, k) * other(k, j);
      }
    return p;
  }

  RatMatrix operator+(const RatMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw UsageError("matrix sum: dimension mismatch");
    RatMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] + other.data_[i];
    return s;
  }

  RatMatrix operator-(const RatMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw UsageError("matrix difference: dimension mismatch");
    RatMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] - other.data_[i];
    return s;
  }

  friend RatMatrix operator*(const Rational& s, const RatMatrix& m) {
    RatMatrix r = m;
    for (auto& x : r.data_) x *= s;
    return r;
  }

  bool operator==(const RatMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Applies m to every vector of the list.
inline std::vector<RatVector> apply_all(const RatMatrix& m, const std::vector<RatVector>& vs) {
  std::vector<RatVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(m * v);
  return out;
}

}  // namespace polyreg
