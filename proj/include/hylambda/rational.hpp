#pragma once

// Small exact rational type on int64 with __int128 intermediates.  The
// invariant formulas only ever produce denominators of a few hundred, so
// overflow means something is badly wrong; it throws rather than wrapping.

#include <cstdint>
#include <string>

#include "hylambda/errors.hpp"

namespace hylambda {

class Rational {
  public:
    Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { assign(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator+(const Rational& r) const {
        return from128(i128(num_) * r.den_ + i128(r.num_) * den_, i128(den_) * r.den_);
    }
    Rational operator-(const Rational& r) const {
        return from128(i128(num_) * r.den_ - i128(r.num_) * den_, i128(den_) * r.den_);
    }
    Rational operator*(const Rational& r) const {
        return from128(i128(num_) * r.num_, i128(den_) * r.den_);
    }
    Rational operator/(const Rational& r) const {
        if (r.num_ == 0) fail(ErrorKind::InvalidArgument, "rational division by zero");
        return from128(i128(num_) * r.den_, i128(den_) * r.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    bool operator==(const Rational& r) const { return num_ == r.num_ && den_ == r.den_; }
    bool operator<(const Rational& r) const {
        return i128(num_) * r.den_ < i128(r.num_) * den_;
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    using i128 = __int128;

    long long num_ = 0;
    long long den_ = 1;

    void assign(long long n, long long d) {
        if (d == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
        *this = from128(n, d);
    }

    static Rational from128(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = i128(INT64_MAX);
        if (n > lim || n < -lim || d > lim)
            fail(ErrorKind::PrecisionExhausted, "rational overflow");
        Rational out;
        out.num_ = static_cast<long long>(n);
        out.den_ = static_cast<long long>(d);
        return out;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            const i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
};

}  // namespace hylambda
