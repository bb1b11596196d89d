#pragma once

// Fixed-size vectors and matrices used throughout qspin. Everything here is
// a plain value type; no heap, no expression templates.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace qspin {

using complex = std::complex<double>;

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

// |x|^2 for real and complex scalars alike.
template <class T>
constexpr double abs2(const T& x) {
  if constexpr (is_complex<T>::value) {
    return std::norm(x);
  } else {
    return static_cast<double>(x) * static_cast<double>(x);
  }
}

}  // namespace detail

template <class T>
struct Vec3 {
  T x{}, y{}, z{};

  constexpr T& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr const T& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(const T& s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, const T& s) { return a *= s; }
  friend constexpr Vec3 operator*(const T& s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(const Vec3& a, const T& s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

using Vec3d = Vec3<double>;
using Vec3c = Vec3<complex>;

// Bilinear dot product (no conjugation for complex entries).
template <class T>
constexpr T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
constexpr Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
constexpr double norm2(const Vec3<T>& a) {
  return detail::abs2(a.x) + detail::abs2(a.y) + detail::abs2(a.z);
}

template <class T>
double norm(const Vec3<T>& a) {
  return std::sqrt(norm2(a));
}

inline Vec3c to_complex(const Vec3d& v) { return {v.x, v.y, v.z}; }
inline Vec3d real(const Vec3c& v) { return {v.x.real(), v.y.real(), v.z.real()}; }
inline Vec3d imag(const Vec3c& v) { return {v.x.imag(), v.y.imag(), v.z.imag()}; }

template <class T>
double max_abs(const Vec3<T>& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}

/// Dense row-major R x C matrix.
template <class T, std::size_t R, std::size_t C>
struct Matrix {
  std::array<T, R * C> a{};

  static constexpr std::size_t rows = R;
  static constexpr std::size_t cols = C;

  constexpr T& operator()(std::size_t r, std::size_t c) { return a[r * C + c]; }
  constexpr const T& operator()(std::size_t r, std::size_t c) const { return a[r * C + c]; }

  static constexpr Matrix identity()
    requires(R == C)
  {
    Matrix m;
    for (std::size_t i = 0; i < R; ++i) m(i, i) = T(1);
    return m;
  }

  constexpr Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < R * C; ++i) a[i] += o.a[i];
    return *this;
  }
  constexpr Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < R * C; ++i) a[i] -= o.a[i];
    return *this;
  }
  constexpr Matrix& operator*=(const T& s) {
    for (auto& v : a) v *= s;
    return *this;
  }

  friend constexpr Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
  friend constexpr Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
  friend constexpr Matrix operator-(Matrix m) { return m *= T(-1); }
  friend constexpr Matrix operator*(Matrix m, const T& s) { return m *= s; }
  friend constexpr Matrix operator*(const T& s, Matrix m) { return m *= s; }
  friend constexpr bool operator==(const Matrix&, const Matrix&) = default;
};

template <class T, std::size_t R, std::size_t K, std::size_t C>
constexpr Matrix<T, R, C> operator*(const Matrix<T, R, K>& l, const Matrix<T, K, C>& r) {
  Matrix<T, R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const T lik = l(i, k);
      for (std::size_t j = 0; j < C; ++j) out(i, j) += lik * r(k, j);
    }
  return out;
}

template <class T>
constexpr Vec3<T> operator*(const Matrix<T, 3, 3>& m, const Vec3<T>& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
          m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

template <class T, std::size_t R, std::size_t C>
constexpr Matrix<T, C, R> transpose(const Matrix<T, R, C>& m) {
  Matrix<T, C, R> t;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) t(j, i) = m(i, j);
  return t;
}

template <class T, std::size_t R, std::size_t C>
Matrix<T, R, C> conj(const Matrix<T, R, C>& m)
  requires detail::is_complex<T>::value
{
  Matrix<T, R, C> out;
  for (std::size_t i = 0; i < R * C; ++i) out.a[i] = std::conj(m.a[i]);
  return out;
}

template <class T, std::size_t N>
constexpr T trace(const Matrix<T, N, N>& m) {
  T t{};
  for (std::size_t i = 0; i < N; ++i) t += m(i, i);
  return t;
}

template <class T>
constexpr T determinant(const Matrix<T, 2, 2>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
constexpr T determinant(const Matrix<T, 3, 3>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Largest entrywise |l - r|.
template <class T, std::size_t R, std::size_t C>
double max_abs_diff(const Matrix<T, R, C>& l, const Matrix<T, R, C>& r) {
  double d = 0.0;
  for (std::size_t i = 0; i < R * C; ++i) d = std::max(d, std::abs(l.a[i] - r.a[i]));
  return d;
}

template <class T>
using Mat2 = Matrix<T, 2, 2>;
template <class T>
using Mat3 = Matrix<T, 3, 3>;
template <class T>
using Mat4 = Matrix<T, 4, 4>;

using Mat3d = Mat3<double>;
using Mat4d = Mat4<double>;
using Mat2c = Mat2<complex>;
using Mat4c = Mat4<complex>;

template <class To, class From, std::size_t R, std::size_t C>
constexpr Matrix<To, R, C> matrix_cast(const Matrix<From, R, C>& m) {
  Matrix<To, R, C> out;
  for (std::size_t i = 0; i < R * C; ++i) out.a[i] = To(m.a[i]);
  return out;
}

}  // namespace qspin
