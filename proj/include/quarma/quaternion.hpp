// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace quarma {

// Hamilton quaternion q = a + b*i + c*j + d*k over double.
// Components are stored and serialized in (a, b, c, d) order everywhere.
struct Quat {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  constexpr Quat() = default;
  constexpr Quat(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
  static constexpr Quat real(double r) { return {r, 0.0, 0.0, 0.0}; }

  constexpr Quat& operator+=(const Quat& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  constexpr Quat& operator-=(const Quat& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  constexpr Quat& operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }
};

constexpr Quat operator+(Quat p, const Quat& q) { return p += q; }
constexpr Quat operator-(Quat p, const Quat& q) { return p -= q; }
constexpr Quat operator-(const Quat& q) { return {-q.a, -q.b, -q.c, -q.d}; }
constexpr Quat operator*(Quat q, double s) { return q *= s; }
constexpr Quat operator*(double s, Quat q) { return q *= s; }

// Hamilton product. Non-commutative: i*j = k, j*i = -k.
constexpr Quat operator*(const Quat& p, const Quat& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

constexpr Quat conj(const Quat& q) { return {q.a, -q.b, -q.c, -q.d}; }

constexpr double norm2(const Quat& q) { return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d; }

inline double abs(const Quat& q) { return std::sqrt(norm2(q)); }

enum class Axis { i, j, k };

// Involution q^mu = -mu q mu: keeps the mu-axis component, flips the other two
// imaginary components.
constexpr Quat involution(const Quat& q, Axis mu) {
  switch (mu) {
    case Axis::i:
      return {q.a, q.b, -q.c, -q.d};
    case Axis::j:
      return {q.a, -q.b, q.c, -q.d};
    case Axis::k:
    default:
      return {q.a, -q.b, -q.c, q.d};
  }
}

constexpr Quat unit(Axis mu) {
  switch (mu) {
    case Axis::i:
      return {0.0, 1.0, 0.0, 0.0};
    case Axis::j:
      return {0.0, 0.0, 1.0, 0.0};
    case Axis::k:
    default:
      return {0.0, 0.0, 0.0, 1.0};
  }
}

constexpr bool operator==(const Quat& p, const Quat& q) {
  return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
}

}  // namespace quarma
