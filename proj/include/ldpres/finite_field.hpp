// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/number_theory.hpp"

namespace ldpres {

// Polynomials over GF(p) as coefficient vectors, constant term first.
namespace poly {

using Coeffs = std::vector<int>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic divisor.
inline Coeffs mod(Coeffs a, const Coeffs& monic, int p) {
  trim(a);
  const int dm = static_cast<int>(monic.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int lead = a.back();
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    for (int i = 0; i <= dm; ++i) {
      a[shift + i] = ((a[shift + i] - lead * monic[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

inline bool divides(const Coeffs& monic, const Coeffs& a, int p) {
  return mod(a, monic, p).empty();
}

// Monic polynomial x^degree + sum_i digit_i(code) x^i, digits in base p.
inline Coeffs monic_from_code(std::int64_t code, int degree, int p) {
  Coeffs c(degree + 1, 0);
  for (int i = 0; i < degree; ++i) {
    c[i] = static_cast<int>(code % p);
    code /= p;
  }
  c[degree] = 1;
  return c;
}

inline bool is_irreducible(const Coeffs& monic, int p) {
  const int m = static_cast<int>(monic.size()) - 1;
  for (int d = 1; d <= m / 2; ++d) {
    const std::int64_t count = ipow(p, d);
    for (std::int64_t code = 0; code < count; ++code) {
      if (divides(monic_from_code(code, d, p), monic, p)) return false;
    }
  }
  return true;
}

// Smallest monic irreducible of the given degree, ordering candidates
// lexicographically by (c_{m-1}, ..., c_0).
inline Coeffs smallest_irreducible(int degree, int p) {
  const std::int64_t count = ipow(p, degree);
  for (std::int64_t code = 0; code < count; ++code) {
    auto candidate = monic_from_code(code, degree, p);
    if (is_irreducible(candidate, p)) return candidate;
  }
  throw InternalError("no irreducible polynomial of degree " + std::to_string(degree));
}

}  // namespace poly

// GF(p^m). Elements are integers in [0, q) whose base-p digits are the
// coefficients of the residue polynomial, constant term least significant.
class FiniteField {
 public:
  using Element = std::uint32_t;

  explicit FiniteField(std::int64_t order) {
    const auto pp = prime_power_decomposition(order);
    if (!pp) throw ArgumentError("field order " + std::to_string(order) + " is not a prime power");
    require(order <= (std::int64_t{1} << 24), "field order too large");
    p_ = static_cast<int>(pp->prime);
    m_ = pp->exponent;
    q_ = order;
    modulus_ = m_ == 1 ? poly::Coeffs{0, 1} : poly::smallest_irreducible(m_, p_);
  }

  int characteristic() const { return p_; }
  int degree() const { return m_; }
  std::int64_t order() const { return q_; }
  const poly::Coeffs& modulus() const { return modulus_; }

  Element add(Element a, Element b) const {
    if (m_ == 1) return static_cast<Element>((a + b) % p_);
    Element r = 0, scale = 1;
    for (int i = 0; i < m_; ++i) {
      r += static_cast<Element>((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return r;
  }

  Element neg(Element a) const {
    Element r = 0, scale = 1;
    for (int i = 0; i < m_; ++i) {
      r += static_cast<Element>((p_ - a % p_) % p_) * scale;
      a /= p_;
      scale *= p_;
    }
    return r;
  }

  Element sub(Element a, Element b) const { return add(a, neg(b)); }

  Element mul(Element a, Element b) const {
    if (m_ == 1) return static_cast<Element>((std::uint64_t{a} * b) % p_);
    const auto pa = to_coeffs(a), pb = to_coeffs(b);
    poly::Coeffs prod(2 * m_, 0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p_;
    }
    return from_coeffs(poly::mod(std::move(prod), modulus_, p_));
  }

  Element pow(Element a, std::int64_t e) const {
    Element result = 1;
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  Element inv(Element a) const {
    require(a != 0, "zero has no multiplicative inverse");
    return pow(a, q_ - 2);
  }

  // Quadratic character: 0 for zero, +1 for nonzero squares, -1 otherwise.
  // Odd characteristic only.
  int chi(Element a) const {
    if (a == 0) return 0;
    return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
  }

 private:
  poly::Coeffs to_coeffs(Element a) const {
    poly::Coeffs c(m_, 0);
    for (int i = 0; i < m_; ++i) {
      c[i] = static_cast<int>(a % p_);
      a /= p_;
    }
    return c;
  }

  Element from_coeffs(const poly::Coeffs& c) const {
    Element r = 0, scale = 1;
    for (int coeff : c) {
      r += static_cast<Element>(coeff) * scale;
      scale *= p_;
    }
    return r;
  }

  int p_ = 2;
  int m_ = 1;
  std::int64_t q_ = 2;
  poly::Coeffs modulus_;
};

}  // namespace ldpres
