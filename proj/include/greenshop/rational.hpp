#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace greenshop {

/// Exact fraction used for machine speeds, power draws and stretch factors.
/// Always normalized: den > 0, gcd(num, den) == 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    /// Accepts "7", "-2", "1.25", "4/3".
    static Rational parse(std::string_view text);

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }

    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Decimal text when the value has a terminating expansion, "num/den" otherwise.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] std::int64_t floor() const;
    [[nodiscard]] std::int64_t ceil() const;

    [[nodiscard]] bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a, const Rational &b);
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);

    friend bool operator==(const Rational &a, const Rational &b) = default;
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
    struct Normalized {};
    constexpr Rational(Normalized, std::int64_t num, std::int64_t den) : num_(num), den_(den) {}
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace greenshop
