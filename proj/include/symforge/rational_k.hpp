#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace symforge {

/// Frequency ratio k = m/n in lowest terms, k >= 1/2.
class RationalK {
 public:
  RationalK(int m, int n) : m_(m), n_(n) {
    if (m <= 0 || n <= 0) throw std::invalid_argument("m and n must be positive");
    if (std::gcd(m, n) != 1) throw std::invalid_argument("m and n must be coprime");
    if (2 * m < n) throw std::invalid_argument("k = m/n must be at least 1/2");
  }

  int m() const { return m_; }
  int n() const { return n_; }
  mpq_class value() const { return mpq_class(m_, n_); }
  double as_double() const { return static_cast<double>(m_) / n_; }
  bool even_parity() const { return (m_ + n_) % 2 == 0; }
  std::string to_string() const { return n_ == 1 ? std::to_string(m_) : std::to_string(m_) + "/" + std::to_string(n_); }

 private:
  int m_;
  int n_;
};

}  // namespace symforge
