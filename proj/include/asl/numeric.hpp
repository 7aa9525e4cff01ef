#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "asl/errors.hpp"

namespace asl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {x * c, y * c}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // 90 degree counterclockwise rotation
    Vec2 rot90() const { return {-y, x}; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }

// Symmetric 2x2 matrix (Hessians, metric blocks).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const { return xx * yy - xy * xy; }
    double trace() const { return xx + yy; }
    bool positive_definite() const { return xx > 0.0 && det() > 0.0; }
    Sym2 operator+(Sym2 o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Sym2 operator-(Sym2 o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    Sym2 operator*(double c) const { return {xx * c, xy * c, yy * c}; }
    Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    Sym2 inverse() const {
        const double d = det();
        if (d == 0.0) throw singularity_error("Sym2::inverse: singular matrix");
        return {yy / d, -xy / d, xx / d};
    }
};

// General 2x2, used for chain-rule algebra on gradient maps.
struct Mat2 {
    double a = 0.0, b = 0.0; // [a b]
    double c = 0.0, d = 0.0; // [c d]

    static Mat2 from(Sym2 s) { return {s.xx, s.xy, s.xy, s.yy}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(double k) const { return {a * k, b * k, c * k, d * k}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

// Exact rational arithmetic for the domain and polytope coefficients.
// Numerators and denominators stay tiny here, so int64 is plenty.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw parameter_error("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return double(num_) / double(den_); }

    Rational operator+(Rational o) const {
        return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
    }
    Rational operator-(Rational o) const {
        return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
    }
    Rational operator*(Rational o) const { return {num_ * o.num_, den_ * o.den_}; }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    bool operator==(Rational o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(Rational o) const { return !(*this == o); }
    bool is_zero() const { return num_ == 0; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace asl
