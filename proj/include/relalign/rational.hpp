#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace relalign {

// Exact rational number with 64-bit numerator/denominator; intermediate
// products are computed in 128 bits and the result is always normalized.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    bool operator==(const Rational& o) const = default;
    std::strong_ordering operator<=>(const Rational& o) const;

    bool is_zero() const { return num_ == 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Mixed form: "0", "3", "5/1024", "3+5/1024", "-1/2".
    std::string to_string() const;

    // Accepts "a", "a/b", "a+b/c" and plain decimals such as "0.25".
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace relalign
