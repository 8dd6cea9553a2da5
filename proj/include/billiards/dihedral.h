#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "billiards/numeric.h"

namespace billiards {

// num·π/den with gcd(|num|, den) = 1 and den >= 1.
class RationalAngle {
public:
    RationalAngle() = default;
    RationalAngle(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double radians() const;

    // Representative in [0, 2π) and [0, π) respectively.
    RationalAngle mod_two_pi() const;
    RationalAngle mod_pi() const;

    RationalAngle operator+(const RationalAngle& o) const;
    RationalAngle operator-(const RationalAngle& o) const;
    RationalAngle operator-() const { return {-num_, den_}; }
    RationalAngle times(std::int64_t k) const { return {num_ * k, den_}; }
    RationalAngle half() const { return {num_, den_ * 2}; }

    bool operator==(const RationalAngle& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalAngle& o) const { return !(*this == o); }
    bool operator<(const RationalAngle& o) const;

    std::string str() const;  // "3π/4", "0", "π"

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

template <class T>
using Mat2 = std::array<T, 4>;  // row major: a b / c d

enum class Kind { Rotation, Reflection };

// Element of a finite subgroup of O(2), kept symbolically.
class DihedralElement {
public:
    DihedralElement() = default;
    static DihedralElement identity() { return {}; }
    static DihedralElement rot(const RationalAngle& a);
    static DihedralElement refl(const RationalAngle& axis);
    static DihedralElement rot(std::int64_t num, std::int64_t den) { return rot(RationalAngle(num, den)); }
    static DihedralElement refl(std::int64_t num, std::int64_t den) { return refl(RationalAngle(num, den)); }

    Kind kind() const { return kind_; }
    bool is_rotation() const { return kind_ == Kind::Rotation; }
    bool is_reflection() const { return kind_ == Kind::Reflection; }
    const RationalAngle& angle() const { return angle_; }

    DihedralElement inverse() const;

    bool operator==(const DihedralElement& o) const { return kind_ == o.kind_ && angle_ == o.angle_; }
    bool operator!=(const DihedralElement& o) const { return !(*this == o); }
    // Rotations before reflections, then by angle.
    bool operator<(const DihedralElement& o) const;

    std::string str() const;  // "rot(π/2)", "refl(0)"

private:
    Kind kind_ = Kind::Rotation;
    RationalAngle angle_{0, 1};
};

DihedralElement compose(const DihedralElement& a, const DihedralElement& b);
inline DihedralElement operator*(const DihedralElement& a, const DihedralElement& b) { return compose(a, b); }
DihedralElement power(const DihedralElement& g, std::int64_t k);

// The frame angle θ0 conjugates the symbolic group: reflections act about axis θ0 + φ.
Mat2<double> matrix(const DihedralElement& g, double frame = 0.0);
// Exact entries exist for rotations by multiples of π/2 and reflection axes at multiples of π/4.
std::optional<Mat2<Rational>> matrix_exact(const DihedralElement& g);

Vec2d apply(const DihedralElement& g, const Vec2d& p, double frame = 0.0);
// Throws std::domain_error when g has no exact matrix.
Vec2q apply(const DihedralElement& g, const Vec2q& p);

template <class T>
Vec2<T> apply_matrix(const Mat2<T>& m, const Vec2<T>& p) {
    return {m[0] * p.x + m[1] * p.y, m[2] * p.x + m[3] * p.y};
}

bool is_real_scalar(const DihedralElement& g);

// Element applied when a trajectory continues through a vertex of angle π/n
// whose bisector makes angle π/(2n) with the first edge, per the remark on removable points.
DihedralElement twist(std::int64_t n);

}  // namespace billiards
