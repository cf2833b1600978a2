#include "greenshop/rational.hpp"

#include "greenshop/errors.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace greenshop {

namespace {

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw ParameterError("rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

} // namespace

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den == 0) {
        throw ParameterError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Rational(Normalized{}, narrow(num), narrow(den));
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("not a rational number: '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : Rational(Rational::from_wide(num, den)) {}

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) {
        throw ParseError("empty rational number");
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::int64_t den = parse_int(text.substr(slash + 1), whole);
        if (den == 0) {
            throw ParseError("zero denominator in '" + std::string(whole) + "'");
        }
        return Rational::from_wide(parse_int(text.substr(0, slash), whole), den);
    }
    bool negative = false;
    std::string_view body = text;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    std::string_view int_part = body;
    std::string_view frac_part;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        int_part = body.substr(0, dot);
        frac_part = body.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
        throw ParseError("not a rational number: '" + std::string(whole) + "'");
    }
    if (frac_part.size() > 15) {
        throw ParseError("too many decimal places: '" + std::string(whole) + "'");
    }
    const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, whole);
    std::int64_t fp = 0;
    std::int64_t scale = 1;
    if (!frac_part.empty()) {
        fp = parse_int(frac_part, whole);
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    }
    if (ip < 0 || fp < 0) {
        throw ParseError("not a rational number: '" + std::string(whole) + "'");
    }
    __int128 num = static_cast<__int128>(ip) * scale + fp;
    return Rational::from_wide(negative ? -num : num, scale);
}

std::string Rational::to_string() const {
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    const int digits = std::max(twos, fives);
    if (digits == 0) {
        return std::to_string(num_);
    }
    __int128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num_) * (scale / den_);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    const std::int64_t ip = narrow(scaled / scale);
    std::string frac = std::to_string(narrow(scaled % scale));
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return (negative ? "-" : "") + std::to_string(ip) + (frac.empty() ? "" : "." + frac);
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

Rational operator+(const Rational &a, const Rational &b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational &a, const Rational &b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational &a, const Rational &b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational &a, const Rational &b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace greenshop
