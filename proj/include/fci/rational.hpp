#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace fci {

// Exact reduced fraction. Big enough for averaged Chern numbers; equality is
// exact, never floating point.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend bool operator==(const Rational&, const Rational&) = default;

    // "1/2", "-1", "0" — integer values drop the denominator.
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace fci
