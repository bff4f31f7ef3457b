#include "fire/money.hpp"

#include "fire/errors.hpp"

#include <cmath>
#include <limits>

namespace fire {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    if (a > kMax - b) throw Error("Money overflow");
    return a + b;
}

} // namespace

Money Money::from_units(std::int64_t units) {
    if (units < 0) throw Error("Money cannot be negative");
    Money m;
    m.units_ = units;
    return m;
}

Money Money::parse(std::string_view text) {
    auto fail = [&] { return Error("invalid decimal amount: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    if (text.front() == '+') text.remove_prefix(1);
    if (text.empty() || text.front() == '-') throw fail();

    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw fail();
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw fail();
        any_digit = true;
        int d = c - '0';
        if (!seen_dot) {
            if (whole > (kMax / kUnitsPerUsd - d) / 10) throw Error("Money overflow");
            whole = whole * 10 + d;
        } else {
            if (++frac_digits > kFractionDigits) throw fail();
            frac = frac * 10 + d;
        }
    }
    if (!any_digit) throw fail();
    for (int i = frac_digits; i < kFractionDigits; ++i) frac *= 10;
    return from_units(checked_add(whole * kUnitsPerUsd, frac));
}

Money Money::from_double(double usd) {
    if (!std::isfinite(usd) || usd < 0) throw Error("Money must be a finite non-negative amount");
    long double scaled = static_cast<long double>(usd) * kUnitsPerUsd;
    if (scaled >= static_cast<long double>(kMax)) throw Error("Money overflow");
    return from_units(static_cast<std::int64_t>(std::floor(scaled + 0.5L)));
}

std::string Money::to_string() const {
    std::string whole = std::to_string(units_ / kUnitsPerUsd);
    std::int64_t frac = units_ % kUnitsPerUsd;
    if (frac == 0) return whole;
    std::string digits = std::to_string(frac);
    digits.insert(0, kFractionDigits - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    return whole + "." + digits;
}

std::string Money::to_fixed(int digits) const {
    if (digits < 0 || digits > kFractionDigits) throw Error("to_fixed: digits out of range");
    std::int64_t step = 1;
    for (int i = digits; i < kFractionDigits; ++i) step *= 10;
    std::int64_t rounded = (units_ / step) + ((units_ % step) * 2 >= step ? 1 : 0);
    std::int64_t per_usd = kUnitsPerUsd / step;
    std::string out = std::to_string(rounded / per_usd);
    if (digits == 0) return out;
    std::string frac = std::to_string(rounded % per_usd);
    frac.insert(0, digits - frac.size(), '0');
    return out + "." + frac;
}

Money& Money::operator+=(Money other) {
    units_ = checked_add(units_, other.units_);
    return *this;
}

Money operator*(Money a, std::int64_t count) {
    if (count < 0) throw Error("Money cannot be scaled by a negative count");
    if (count != 0 && a.units_ > kMax / count) throw Error("Money overflow");
    return Money::from_units(a.units_ * count);
}

} // namespace fire
