#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "bunkbed/errors.hpp"

namespace bunkbed {

// All exact computation runs on arbitrary-precision integers and rationals.
// Floating point appears only in the Monte Carlo module.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt int_pow(BigInt base, int exp) {
    BigInt result = 1;
    while (exp > 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

// "num/den" rendering; integral values print without the "/1".
inline std::string to_string(const Rational& r) { return r.str(); }

// Accepts "a/b", decimal literals like "0.35", and plain integers, all
// converted exactly.
inline Rational parse_rational(const std::string& text) {
    const auto fail = [&] {
        throw Error(errc::invalid_parameters, "cannot parse rational '" + text + "'");
    };
    if (text.empty()) fail();
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0) fail();
            return Rational(num, den);
        }
        auto dot = text.find('.');
        if (dot != std::string::npos) {
            std::string head = text.substr(0, dot);
            std::string tail = text.substr(dot + 1);
            if (tail.empty()) fail();
            for (char c : tail)
                if (c < '0' || c > '9') fail();
            bool negative = !head.empty() && head[0] == '-';
            if (negative || (!head.empty() && head[0] == '+')) head = head.substr(1);
            BigInt whole = head.empty() ? BigInt(0) : BigInt(head);
            BigInt scale = int_pow(10, static_cast<int>(tail.size()));
            BigInt num = whole * scale + BigInt(tail);
            if (negative) num = -num;
            return Rational(num, scale);
        }
        return Rational(BigInt(text));
    } catch (const std::exception&) {
        fail();
    }
    return Rational();  // unreachable
}

inline void require_probability(const Rational& p) {
    if (p < 0 || p > 1)
        throw Error(errc::invalid_parameters, "probability " + to_string(p) + " outside [0,1]");
}

}  // namespace bunkbed
