#include "relalign/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace relalign {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr i128 lim = static_cast<i128>(INT64_MAX);
    if (num > lim || num < -lim || den > lim) throw std::overflow_error("rational overflow");
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

Rational Rational::operator+(const Rational& o) const {
    if (den_ == o.den_) return make(static_cast<i128>(num_) + o.num_, den_);
    return make(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return *this + Rational(-o.num_, o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return make(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    return make(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    i128 lhs = static_cast<i128>(num_) * o.den_;
    i128 rhs = static_cast<i128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    if (num_ < 0) return "-" + Rational(-num_, den_).to_string();
    std::int64_t whole = num_ / den_;
    std::int64_t rest = num_ % den_;
    std::string frac = std::to_string(rest) + "/" + std::to_string(den_);
    if (whole == 0) return frac;
    return std::to_string(whole) + "+" + frac;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) fail();
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) fail();
        std::int64_t v = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
            v = v * 10 + (s[i] - '0');
        }
        return neg ? -v : v;
    };
    auto parse_simple = [&](std::string_view s) -> Rational {
        if (auto slash = s.find('/'); slash != std::string_view::npos)
            return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            std::string_view frac = s.substr(dot + 1);
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            std::int64_t whole = s.substr(0, dot).empty() ? 0 : parse_int(s.substr(0, dot));
            std::int64_t f = frac.empty() ? 0 : parse_int(frac);
            bool neg = !s.empty() && s[0] == '-';
            return Rational(whole, 1) + Rational(neg ? -f : f, scale);
        }
        return Rational(parse_int(s));
    };
    // "a+b/c" mixed form; a leading sign belongs to the whole part.
    if (auto plus = text.find('+', 1); plus != std::string_view::npos)
        return parse_simple(text.substr(0, plus)) + parse_simple(text.substr(plus + 1));
    return parse_simple(text);
}

}  // namespace relalign
