// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_VEC3_HPP
#define FSUSC_VEC3_HPP

#include <cmath>
#include <complex>
#include <type_traits>

namespace fsusc
{

using cplx = std::complex<double>;

template <class T>
struct Vec3
{
  T x{}, y{}, z{};

  constexpr T &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr const T &operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 &operator+=(const Vec3 &o)
  {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3 &operator-=(const Vec3 &o)
  {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3 &operator*=(const T &s)
  {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
  friend Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
  friend bool operator==(const Vec3 &a, const Vec3 &b) = default;
};

using Vec3d = Vec3<double>;
using Vec3c = Vec3<cplx>;

template <class S, class T>
auto operator*(const S &s, const Vec3<T> &v) -> Vec3<decltype(s * v.x)>
{
  return {s * v.x, s * v.y, s * v.z};
}

// Bilinear product (no conjugation).
template <class A, class B>
auto dot(const Vec3<A> &a, const Vec3<B> &b)
{
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class A, class B>
auto cross(const Vec3<A> &a, const Vec3<B> &b) -> Vec3<decltype(a.x * b.x)>
{
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
double norm(const Vec3<T> &v)
{
  return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z));
}

inline Vec3d normalized(const Vec3d &v)
{
  const double n = norm(v);
  return {v.x / n, v.y / n, v.z / n};
}

inline Vec3c to_complex(const Vec3d &v) { return {v.x, v.y, v.z}; }

}  // namespace fsusc

#endif  // FSUSC_VEC3_HPP
