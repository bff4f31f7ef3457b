#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fire {

// Non-negative USD amount in fixed point (1e-12 USD units). Costs are
// compared exactly in tests, so no binary floating point is involved.
class Money {
public:
    static constexpr std::int64_t kUnitsPerUsd = 1'000'000'000'000;  // picodollars
    static constexpr int kFractionDigits = 12;

    constexpr Money() = default;

    static Money from_units(std::int64_t units);
    // Parses a plain decimal such as "0.00105" or "12". More than 12
    // fractional digits is rejected rather than silently rounded.
    static Money parse(std::string_view decimal);
    // Rounds half-up to the nearest unit; for config values given as JSON numbers.
    static Money from_double(double usd);

    constexpr std::int64_t units() const { return units_; }
    double to_double() const { return static_cast<double>(units_) / static_cast<double>(kUnitsPerUsd); }

    // Shortest exact decimal ("0.00105", "1.05", "0").
    std::string to_string() const;
    // Half-up rounding to `digits` fractional digits, always printed with that many.
    std::string to_fixed(int digits) const;

    Money& operator+=(Money other);
    friend Money operator+(Money a, Money b) { return a += b; }
    friend Money operator*(Money a, std::int64_t count);
    friend Money operator*(std::int64_t count, Money a) { return a * count; }

    friend constexpr auto operator<=>(Money, Money) = default;
    friend constexpr bool operator==(Money, Money) = default;

private:
    std::int64_t units_ = 0;
};

} // namespace fire
