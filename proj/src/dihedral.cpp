#include "billiards/dihedral.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace billiards {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

RationalAngle::RationalAngle(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("RationalAngle: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
}

double RationalAngle::radians() const {
    return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
}

RationalAngle RationalAngle::mod_two_pi() const {
    std::int64_t period = 2 * den_;
    return {num_ - floor_div(num_, period) * period, den_};
}

RationalAngle RationalAngle::mod_pi() const {
    return {num_ - floor_div(num_, den_) * den_, den_};
}

RationalAngle RationalAngle::operator+(const RationalAngle& o) const {
    std::int64_t l = std::lcm(den_, o.den_);
    return {num_ * (l / den_) + o.num_ * (l / o.den_), l};
}

RationalAngle RationalAngle::operator-(const RationalAngle& o) const { return *this + (-o); }

bool RationalAngle::operator<(const RationalAngle& o) const {
    // cross-multiplication; denominators stay small for any finite group we build
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::string RationalAngle::str() const {
    if (num_ == 0) return "0";
    std::string s;
    if (num_ == -1) s = "-π";
    else if (num_ == 1) s = "π";
    else s = std::to_string(num_) + "π";
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
}

DihedralElement DihedralElement::rot(const RationalAngle& a) {
    DihedralElement g;
    g.kind_ = Kind::Rotation;
    g.angle_ = a.mod_two_pi();
    return g;
}

DihedralElement DihedralElement::refl(const RationalAngle& axis) {
    DihedralElement g;
    g.kind_ = Kind::Reflection;
    g.angle_ = axis.mod_pi();
    return g;
}

DihedralElement DihedralElement::inverse() const {
    if (is_reflection()) return *this;
    return rot(-angle_);
}

bool DihedralElement::operator<(const DihedralElement& o) const {
    if (kind_ != o.kind_) return kind_ == Kind::Rotation;
    return angle_ < o.angle_;
}

std::string DihedralElement::str() const {
    return (is_rotation() ? "rot(" : "refl(") + angle_.str() + ")";
}

DihedralElement compose(const DihedralElement& a, const DihedralElement& b) {
    const auto& x = a.angle();
    const auto& y = b.angle();
    if (a.is_rotation() && b.is_rotation()) return DihedralElement::rot(x + y);
    if (a.is_rotation()) return DihedralElement::refl(y + x.half());
    if (b.is_rotation()) return DihedralElement::refl(x - y.half());
    return DihedralElement::rot((x - y).times(2));
}

DihedralElement power(const DihedralElement& g, std::int64_t k) {
    if (g.is_reflection()) return (k % 2 == 0) ? DihedralElement::identity() : g;
    return DihedralElement::rot(g.angle().times(k));
}

Mat2<double> matrix(const DihedralElement& g, double frame) {
    if (g.is_rotation()) {
        double t = g.angle().radians();
        double c = std::cos(t), s = std::sin(t);
        return {c, -s, s, c};
    }
    double t = 2.0 * (g.angle().radians() + frame);
    double c = std::cos(t), s = std::sin(t);
    return {c, s, s, -c};
}

std::optional<Mat2<Rational>> matrix_exact(const DihedralElement& g) {
    // rotations: angle·2 must be an integer multiple of π (den ∈ {1,2});
    // reflections: the doubled axis angle is a multiple of π/2 (den ∈ {1,2,4}).
    const auto& a = g.angle();
    auto quarter_turns = [](const RationalAngle& r) -> std::optional<std::int64_t> {
        // r = k·π/2
        if (2 % r.den() != 0) return std::nullopt;
        return r.num() * (2 / r.den());
    };
    auto cs = [](std::int64_t k) -> std::pair<int, int> {
        switch (((k % 4) + 4) % 4) {
            case 0: return {1, 0};
            case 1: return {0, 1};
            case 2: return {-1, 0};
            default: return {0, -1};
        }
    };
    if (g.is_rotation()) {
        auto k = quarter_turns(a);
        if (!k) return std::nullopt;
        auto [c, s] = cs(*k);
        return Mat2<Rational>{Rational(c), Rational(-s), Rational(s), Rational(c)};
    }
    auto k = quarter_turns(a.times(2));
    if (!k) return std::nullopt;
    auto [c, s] = cs(*k);
    return Mat2<Rational>{Rational(c), Rational(s), Rational(s), Rational(-c)};
}

Vec2d apply(const DihedralElement& g, const Vec2d& p, double frame) {
    return apply_matrix(matrix(g, frame), p);
}

Vec2q apply(const DihedralElement& g, const Vec2q& p) {
    auto m = matrix_exact(g);
    if (!m) throw std::domain_error("no exact matrix for " + g.str());
    return apply_matrix(*m, p);
}

bool is_real_scalar(const DihedralElement& g) {
    if (!g.is_rotation()) return false;
    const auto& a = g.angle();
    return a.num() == 0 || (a.num() == 1 && a.den() == 1);
}

DihedralElement twist(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("twist: n must be at least 2");
    if (n % 2 == 0) return DihedralElement::rot(1, 1);
    return DihedralElement::refl(n + 1, 2 * n);
}

}  // namespace billiards
