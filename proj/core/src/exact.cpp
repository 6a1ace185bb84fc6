#include "k3c/exact.hpp"

#include <algorithm>
#include <stdexcept>

#include "k3c/error.hpp"

namespace k3c {

namespace {

Integer abs_int(Integer const& x) { return x < 0 ? Integer(-x) : x; }

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// Extended gcd with g >= 0 and s*x + t*y = g.
void extended_gcd(Integer const& x, Integer const& y, Integer& g, Integer& s, Integer& t) {
  Integer old_r = x, r = y;
  Integer old_s = 1, cur_s = 0;
  Integer old_t = 0, cur_t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  s = old_s;
  t = old_t;
}

}  // namespace

RatMatrix to_rational(IntMatrix const& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

RatVector to_rational(IntVector const& v) {
  RatVector r;
  r.reserve(v.size());
  for (auto const& x : v) r.emplace_back(x);
  return r;
}

IntMatrix direct_sum(std::vector<IntMatrix> const& blocks) {
  std::size_t n = 0;
  for (auto const& b : blocks) {
    if (!b.square()) throw std::invalid_argument("direct_sum expects square blocks");
    n += b.rows();
  }
  IntMatrix out(n, n);
  std::size_t offset = 0;
  for (auto const& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(offset + i, offset + j) = b(i, j);
    offset += b.rows();
  }
  return out;
}

Integer gcd_of(IntVector const& v) {
  Integer g = 0;
  for (auto const& x : v) g = boost::multiprecision::gcd(g, abs_int(x));
  return g;
}

IntVector clear_denominators(RatVector const& v) {
  Integer l = 1;
  for (auto const& q : v) {
    Integer d = boost::multiprecision::denominator(q);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  IntVector out;
  out.reserve(v.size());
  for (auto const& q : v) out.push_back(boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q)));
  return out;
}

Integer determinant(IntMatrix const& m_in) {
  if (!m_in.square()) throw std::invalid_argument("determinant of non-square matrix");
  std::size_t n = m_in.rows();
  if (n == 0) return 1;
  IntMatrix m = m_in;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(RatMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

IntMatrix integer_kernel(IntMatrix const& m) {
  std::size_t const n = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(n);
  std::vector<bool> active(n, true);

  auto combine = [&](std::size_t p, std::size_t q, Integer const& x, Integer const& y) {
    // Unimodular 2x2 column transform sending (x, y) in this row to (g, 0).
    Integer g, s, t;
    extended_gcd(x, y, g, s, t);
    Integer const xg = x / g;
    Integer const yg = y / g;
    for (IntMatrix* mat : {&a, &u}) {
      for (std::size_t i = 0; i < mat->rows(); ++i) {
        Integer cp = (*mat)(i, p);
        Integer cq = (*mat)(i, q);
        (*mat)(i, p) = s * cp + t * cq;
        (*mat)(i, q) = xg * cq - yg * cp;
      }
    }
  };

  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::size_t pivot = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || a(r, c) == 0) continue;
      if (pivot == n) {
        pivot = c;
        continue;
      }
      combine(pivot, c, a(r, pivot), a(r, c));
    }
    if (pivot == n) continue;
    active[pivot] = false;
  }

  std::vector<IntVector> cols;
  for (std::size_t c = 0; c < n; ++c)
    if (active[c]) cols.push_back(u.column(c));
  return IntMatrix::from_columns(cols, n);
}

IntMatrix saturate_columns(IntMatrix const& gens) {
  std::size_t const n = gens.rows();
  // Vectors orthogonal (standard dot) to every generator, then their kernel.
  IntMatrix perp = integer_kernel(gens.transpose());
  if (perp.cols() == 0) return IntMatrix::identity(n);
  return integer_kernel(perp.transpose());
}

std::vector<Integer> elementary_divisors(IntMatrix a) {
  std::size_t const rows = a.rows(), cols = a.cols();
  std::vector<Integer> out;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block to (t, t).
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a(i, j) != 0 && (bi == rows || abs_int(a(i, j)) < abs_int(a(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) return out;
      swap_rows(a, t, bi);
      swap_cols(a, t, bj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        for (std::size_t j = t; j < cols; ++j) a(i, j) -= q * a(t, j);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        for (std::size_t i = t; i < rows; ++i) a(i, j) -= q * a(i, t);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      for (std::size_t j = t; j < cols; ++j) a(t, j) += a(bad_row, j);
    }
    out.push_back(abs_int(a(t, t)));
  }
  return out;
}

std::optional<RatVector> solve_full_column_rank(RatMatrix const& b, RatVector const& x) {
  std::size_t const m = b.rows(), k = b.cols();
  if (x.size() != m) throw Error("dimension_mismatch", "right-hand side length does not match matrix rows");
  RatMatrix aug(m, k + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = b(i, j);
    aug(i, k) = x[i];
  }
  std::vector<std::size_t> pivot_row(k);
  std::size_t r = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = r;
    while (p < m && aug(p, c) == 0) ++p;
    if (p == m) return std::nullopt;  // rank deficient
    if (p != r)
      for (std::size_t j = 0; j <= k; ++j) std::swap(aug(p, j), aug(r, j));
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || aug(i, c) == 0) continue;
      Rational f = aug(i, c) / aug(r, c);
      for (std::size_t j = c; j <= k; ++j) aug(i, j) -= f * aug(r, j);
    }
    pivot_row[c] = r++;
  }
  for (std::size_t i = r; i < m; ++i)
    if (aug(i, k) != 0) return std::nullopt;
  RatVector y(k);
  for (std::size_t c = 0; c < k; ++c) y[c] = aug(pivot_row[c], k) / aug(pivot_row[c], c);
  return y;
}

UnimodularPair unimodular_to_first_basis_vector(IntVector const& c_in) {
  std::size_t const n = c_in.size();
  if (n == 0) throw std::invalid_argument("empty vector");
  IntVector c = c_in;
  IntMatrix w = IntMatrix::identity(n);
  IntMatrix winv = IntMatrix::identity(n);

  auto row_sub = [&](std::size_t i, std::size_t j, Integer const& q) {
    // w <- (I - q e_i e_j^T) w ; winv <- winv (I + q e_i e_j^T)
    for (std::size_t k = 0; k < n; ++k) w(i, k) -= q * w(j, k);
    for (std::size_t k = 0; k < n; ++k) winv(k, j) += q * winv(k, i);
    c[i] -= q * c[j];
  };

  for (;;) {
    std::size_t j = n;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (c[i] == 0) continue;
      ++nonzero;
      if (j == n || abs_int(c[i]) < abs_int(c[j])) j = i;
    }
    if (j == n) throw Error("not_primitive", "zero vector has no unimodular completion");
    if (nonzero == 1) {
      if (abs_int(c[j]) != 1) throw Error("not_primitive", "vector is not primitive");
      swap_rows(w, 0, j);
      swap_cols(winv, 0, j);
      std::swap(c[0], c[j]);
      if (c[0] < 0) {
        for (std::size_t k = 0; k < n; ++k) w(0, k) = -w(0, k);
        for (std::size_t k = 0; k < n; ++k) winv(k, 0) = -winv(k, 0);
        c[0] = -c[0];
      }
      return {w, winv};
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || c[i] == 0) continue;
      row_sub(i, j, c[i] / c[j]);
    }
  }
}

Inertia symmetric_inertia(RatMatrix a) {
  if (!a.square()) throw std::invalid_argument("inertia of non-square form");
  std::size_t const n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) != a(j, i)) throw Error("not_symmetric", "form is not symmetric");

  auto swap_both = [&](std::size_t p, std::size_t q) {
    if (p == q) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(q, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, p), a(i, q));
  };

  Inertia out;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t d = k + 1;
      while (d < n && a(d, d) == 0) ++d;
      if (d < n) {
        swap_both(k, d);
      } else {
        std::size_t o = k + 1;
        while (o < n && a(k, o) == 0) ++o;
        if (o == n) {
          ++out.zero;
          continue;
        }
        // e_k <- e_k + e_o gives diagonal 2 a(k, o) since a(o, o) = 0.
        for (std::size_t j = 0; j < n; ++j) a(k, j) += a(o, j);
        for (std::size_t i = 0; i < n; ++i) a(i, k) += a(i, o);
      }
    }
    Rational const p = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational const f = a(i, k) / p;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) = 0;
      a(k, i) = 0;
    }
    if (p > 0)
      ++out.positive;
    else
      ++out.negative;
  }
  return out;
}

std::string to_string(Rational const& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string const& text) {
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string t = trim(text);
  if (t.empty()) throw Error("malformed_rational", "empty rational literal", text);
  auto check_digits = [&](std::string const& part) {
    std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (start == part.size()) throw Error("malformed_rational", "malformed rational literal", text);
    for (std::size_t i = start; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw Error("malformed_rational", "malformed rational literal", text);
  };
  auto slash = t.find('/');
  if (slash == std::string::npos) {
    check_digits(t);
    return Rational(Integer(t[0] == '+' ? t.substr(1) : t));
  }
  std::string num = trim(t.substr(0, slash));
  std::string den = trim(t.substr(slash + 1));
  check_digits(num);
  check_digits(den);
  Integer d(den[0] == '+' ? den.substr(1) : den);
  if (d == 0) throw Error("malformed_rational", "zero denominator", text);
  return Rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
}

}  // namespace k3c
