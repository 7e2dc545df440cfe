#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace subcycle {

template <class T>
struct BasicVec2 {
  T x{};
  T y{};

  friend BasicVec2 operator+(const BasicVec2& a, const BasicVec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend BasicVec2 operator-(const BasicVec2& a, const BasicVec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend BasicVec2 operator*(const T& k, const BasicVec2& a) { return {k * a.x, k * a.y}; }
};

/// Row-major 2x2 matrix.
template <class T>
struct BasicMat2 {
  T a00{}, a01{}, a10{}, a11{};

  static BasicMat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static BasicMat2 zero() { return {T(0), T(0), T(0), T(0)}; }

  T operator()(int i, int j) const {
    if (i == 0) return j == 0 ? a00 : a01;
    return j == 0 ? a10 : a11;
  }

  T trace() const { return a00 + a11; }
  T det() const { return a00 * a11 - a01 * a10; }

  template <class U>
  BasicMat2<U> cast() const {
    return {U(a00), U(a01), U(a10), U(a11)};
  }

  friend BasicMat2 operator*(const BasicMat2& a, const BasicMat2& b) {
    return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
            a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
  }
  friend BasicVec2<T> operator*(const BasicMat2& a, const BasicVec2<T>& v) {
    return {a.a00 * v.x + a.a01 * v.y, a.a10 * v.x + a.a11 * v.y};
  }
  friend BasicMat2 operator+(const BasicMat2& a, const BasicMat2& b) {
    return {a.a00 + b.a00, a.a01 + b.a01, a.a10 + b.a10, a.a11 + b.a11};
  }
  friend BasicMat2 operator-(const BasicMat2& a, const BasicMat2& b) {
    return {a.a00 - b.a00, a.a01 - b.a01, a.a10 - b.a10, a.a11 - b.a11};
  }
  friend BasicMat2 operator*(const T& k, const BasicMat2& a) {
    return {k * a.a00, k * a.a01, k * a.a10, k * a.a11};
  }
  friend bool operator==(const BasicMat2& a, const BasicMat2& b) {
    return a.a00 == b.a00 && a.a01 == b.a01 && a.a10 == b.a10 && a.a11 == b.a11;
  }
};

using Mat2 = BasicMat2<double>;
using Vec2 = BasicVec2<double>;

/// Largest absolute entry difference.
inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.a00 - b.a00), std::abs(a.a01 - b.a01), std::abs(a.a10 - b.a10),
                   std::abs(a.a11 - b.a11)});
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
  return os << "[[" << m.a00 << ", " << m.a01 << "], [" << m.a10 << ", " << m.a11 << "]]";
}

}  // namespace subcycle
