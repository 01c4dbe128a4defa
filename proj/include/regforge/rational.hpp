#ifndef REGFORGE_RATIONAL_HPP
#define REGFORGE_RATIONAL_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace regforge {

using i128 = __int128;
using u128 = unsigned __int128;

namespace detail {

inline u128 uabs128(i128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

inline u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace detail

/// Exact rational over int64 numerator/denominator. Denominator is always
/// positive and gcd(num, den) == 1. Intermediates run through 128-bit
/// integers; a result that does not narrow back to int64 throws
/// std::overflow_error. Equality and ordering are exact (cross-multiplied).
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { *this = normalize(i128(n), i128(d)); }
    static Rational from_int(std::int64_t n) { return Rational(n, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    /// Parses "num/den" or a bare integer. Throws std::invalid_argument.
    static Rational parse(std::string_view s);

    static Rational normalize(i128 n, i128 d) {
        if (d == 0) throw std::invalid_argument("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        if (n == 0) d = 1;
        else {
            u128 g = detail::gcd128(detail::uabs128(n), u128(d));
            n /= i128(g);
            d /= i128(g);
        }
        return Rational(narrow(n), narrow(d), 0);
    }

    Rational operator-() const { return Rational(-num_, den_, 0); }
    Rational operator+(const Rational& o) const {
        return normalize(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return normalize(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return normalize(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::invalid_argument("rational: division by zero");
        return normalize(i128(num_) * o.den_, i128(den_) * o.num_);
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return i128(num_) * o.den_ < i128(o.num_) * den_; }
    bool operator<=(const Rational& o) const { return i128(num_) * o.den_ <= i128(o.num_) * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// ceil(*this * x), x >= 0. Used for subset-size thresholds.
    std::int64_t ceil_scaled(std::int64_t x) const {
        if (num_ < 0) throw std::invalid_argument("rational: ceil_scaled of negative");
        i128 p = i128(num_) * x;
        return narrow((p + den_ - 1) / den_);
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string to_string() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Decimal rendering with `digits` fractional digits, rounded to
    /// nearest (ties away from zero). Rendering only; never used in
    /// comparisons.
    std::string to_decimal(int digits = 12) const;

private:
    Rational(std::int64_t n, std::int64_t d, int) : num_(n), den_(d) {}

    static std::int64_t narrow(i128 v) {
        if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
            throw std::overflow_error("rational: value exceeds 64-bit range");
        return std::int64_t(v);
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(std::string_view s) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
        while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
        return v;
    };
    s = trim(s);
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    auto parse_int = [&](std::string_view v) -> std::int64_t {
        v = trim(v);
        if (v.empty()) throw std::invalid_argument("rational: malformed number");
        std::string tmp(v);
        char* end = nullptr;
        errno = 0;
        long long r = std::strtoll(tmp.c_str(), &end, 10);
        if (errno != 0 || end != tmp.c_str() + tmp.size())
            throw std::invalid_argument("rational: malformed number '" + tmp + "'");
        return r;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(s), 1);
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

inline std::string Rational::to_decimal(int digits) const {
    u128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    u128 n = detail::uabs128(num_);
    u128 scaled = (n * scale + u128(den_) / 2) / u128(den_);
    u128 ip = scaled / scale, fp = scaled % scale;
    std::string frac(digits, '0');
    for (int i = digits - 1; i >= 0; --i) { frac[i] = char('0' + int(fp % 10)); fp /= 10; }
    std::string head;
    if (ip == 0) head = "0";
    while (ip > 0) { head.insert(head.begin(), char('0' + int(ip % 10))); ip /= 10; }
    std::string out = (num_ < 0 ? "-" : "") + head;
    if (digits > 0) out += "." + frac;
    return out;
}

} // namespace regforge

#endif
