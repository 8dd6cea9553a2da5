#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace billiards {

using Rational = mpq_class;

// Backend selection; exact mode carries eps = 0.
enum class Backend { Exact, Float };

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <class T>
struct Vec2 {
    T x{};
    T y{};

    Vec2() = default;
    Vec2(T x_, T y_) : x(std::move(x_)), y(std::move(y_)) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(const T& s) const { return {x * s, y * s}; }
    Vec2 operator/(const T& s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2& o) const { return !(*this == o); }
};

template <class T>
using Point2 = Vec2<T>;

using Vec2d = Vec2<double>;
using Vec2q = Vec2<Rational>;

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.x + a.y * b.y; }

template <class T>
T cross(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.y - a.y * b.x; }

template <class T>
T norm2(const Vec2<T>& a) { return dot(a, a); }

inline double norm(const Vec2d& a) { return std::hypot(a.x, a.y); }
inline double norm(const Vec2q& a) { return std::sqrt(norm2(a).get_d()); }

inline Vec2d to_double(const Vec2d& v) { return v; }
inline Vec2d to_double(const Vec2q& v) { return {v.x.get_d(), v.y.get_d()}; }

inline int sign(double x) { return (x > 0) - (x < 0); }
inline int sign(const Rational& x) { return sgn(x); }

// Zero test for the backend: exact for rationals, |x| <= eps for doubles.
inline bool is_zero(double x, double eps) { return std::fabs(x) <= eps; }
inline bool is_zero(const Rational& x, double) { return sgn(x) == 0; }

template <class T>
struct Scalar;

template <>
struct Scalar<double> {
    static constexpr Backend backend = Backend::Float;
    static double from(const Rational& q) { return q.get_d(); }
    static double from_double(double d) { return d; }
};

template <>
struct Scalar<Rational> {
    static constexpr Backend backend = Backend::Exact;
    static Rational from(const Rational& q) { return q; }
    static Rational from_double(double d) { return Rational(d); }
};

// Parses "p/q", integers, or decimals into an exact rational.
// Decimal literals are exact as written (0.1 becomes 1/10).
Rational parse_rational(const std::string& text);

// True when the literal carries no decimal point or exponent.
bool is_exact_literal(const std::string& text);

std::string to_string(const Rational& q);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace billiards
