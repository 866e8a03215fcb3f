#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "trigbessel/error.hpp"

namespace trigbessel {

__extension__ using i128 = __int128;

// Exact rational number with a normalized int64 representation (den > 0, gcd = 1).
// Intermediate products go through i128; results that do not fit throw.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
    [[nodiscard]] constexpr double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    [[nodiscard]] std::string str() const
    {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "p/q", integers and finite decimals ("0.25" -> 1/4).
    static Rational parse(std::string_view text)
    {
        auto fail = [&] { return ValidationError("not a rational number: '" + std::string(text) + "'"); };
        if (text.empty()) throw fail();
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            return Rational(parse_int(text.substr(0, slash), fail), parse_int(text.substr(slash + 1), fail));
        }
        auto dot = text.find('.');
        if (dot == std::string_view::npos) return Rational(parse_int(text, fail));
        auto frac = text.substr(dot + 1);
        if (frac.size() > 15) throw fail();
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        auto whole_text = text.substr(0, dot);
        bool negative = !whole_text.empty() && whole_text.front() == '-';
        std::int64_t whole = (whole_text.empty() || whole_text == "-" || whole_text == "+") ? 0 : parse_int(whole_text, fail);
        std::int64_t f = frac.empty() ? 0 : parse_int(frac, fail);
        if (f < 0) throw fail();
        Rational r(whole < 0 ? -whole : whole);
        r = r + Rational(f, scale);
        return negative ? -r : r;
    }

    friend Rational operator+(Rational a, Rational b)
    {
        i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
        i128 d = static_cast<i128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(Rational a, Rational b) { return a + (-b); }
    friend Rational operator*(Rational a, Rational b)
    {
        return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator/(Rational a, Rational b)
    {
        if (b.num_ == 0) throw DomainError("rational division by zero");
        return from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    }
    Rational operator-() const
    {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(Rational o) { return *this = *this + o; }
    Rational& operator-=(Rational o) { return *this = *this - o; }
    Rational& operator*=(Rational o) { return *this = *this * o; }

    friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(Rational a, Rational b)
    {
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

private:
    template <typename Fail>
    static std::int64_t parse_int(std::string_view s, Fail&& fail)
    {
        try {
            std::size_t used = 0;
            auto v = std::stoll(std::string(s), &used);
            if (used != s.size()) throw fail();
            return v;
        } catch (const std::logic_error&) {
            throw fail();
        }
    }

    void assign(std::int64_t n, std::int64_t d)
    {
        if (d == 0) throw DomainError("rational with zero denominator");
        *this = from_wide(n, d);
    }

    static Rational from_wide(i128 n, i128 d)
    {
        if (d == 0) throw DomainError("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr i128 lim = static_cast<i128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw UnsupportedError("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace trigbessel
