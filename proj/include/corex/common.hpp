#pragma once
// Shared basics: error type, fixed-point money, numeric formatting, small
// string helpers. Everything downstream assumes money is held in integer
// cents so that sums are exact and order-independent.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corex {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

using i32 = std::int32_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// ---------------------------------------------------------------------------
// Money: USD amounts in integer cents.

// Parses a plain decimal like "123.45" into cents. More than two fraction
// digits are rounded half away from zero. Returns false on anything that is
// not a plain decimal number.
inline bool parse_money_cents(std::string_view s, i64& out) {
    if (s.empty()) return false;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        i = 1;
        if (s.size() == 1) return false;
    }
    i64 whole = 0;
    bool any_digit = false;
    for (; i < s.size() && s[i] != '.'; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        if (whole > (INT64_MAX - 9) / 10) return false;
        whole = whole * 10 + (s[i] - '0');
        any_digit = true;
    }
    i64 frac = 0;   // first two fraction digits as cents
    int rounder = 0;
    if (i < s.size()) {  // at the '.'
        ++i;
        int nf = 0;
        for (; i < s.size(); ++i, ++nf) {
            if (s[i] < '0' || s[i] > '9') return false;
            int d = s[i] - '0';
            if (nf == 0) frac += 10 * d;
            else if (nf == 1) frac += d;
            else if (nf == 2) rounder = d;
            // digits beyond the third cannot change half-away-from-zero
            // rounding of the cent, except to break an exact half upward,
            // which is already the chosen direction.
            any_digit = true;
        }
    }
    if (!any_digit) return false;
    if (whole > (INT64_MAX / 100) - 2) return false;
    i64 cents = whole * 100 + frac + (rounder >= 5 ? 1 : 0);
    out = neg ? -cents : cents;
    return true;
}

// Renders cents as a fixed two-decimal dollar string, e.g. 12345 -> "123.45".
inline std::string format_money_cents(i64 cents) {
    bool neg = cents < 0;
    u64 a = neg ? u64(-(cents + 1)) + 1 : u64(cents);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%llu.%02llu", neg ? "-" : "",
                  (unsigned long long)(a / 100), (unsigned long long)(a % 100));
    return buf;
}

inline double cents_to_usd(i64 cents) { return double(cents) / 100.0; }

// ---------------------------------------------------------------------------
// Numeric formatting: all floating-point output uses 17 significant digits so
// that identical doubles always serialize to identical strings.

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_int(i64 v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%lld", (long long)v);
    return buf;
}

// ---------------------------------------------------------------------------
// Small string helpers.

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline bool parse_int(std::string_view s, i64& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    // from_chars for double is available on this toolchain
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// First two digits of a 6-digit product code.
inline std::string hs_chapter(std::string_view hs6) {
    return std::string(hs6.substr(0, 2));
}

inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(a, b); }

// Type-7 (linear interpolation) quantile of an ascending-sorted vector.
inline double quantile_sorted(const std::vector<double>& xs, double p) {
    if (xs.empty()) throw Error("quantile of empty vector");
    if (xs.size() == 1) return xs[0];
    double h = double(xs.size() - 1) * p;
    std::size_t lo = std::size_t(h);
    if (lo >= xs.size() - 1) return xs.back();
    double frac = h - double(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

}  // namespace corex
