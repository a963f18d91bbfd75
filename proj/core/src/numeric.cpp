#include "invdiff/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "invdiff/errors.hpp"

namespace invdiff {

std::string format_decimal(double value) {
    if (!std::isfinite(value)) {
        throw ValidationError("non-finite value cannot be rendered as a decimal");
    }
    if (value == 0.0) return "0";  // also normalizes -0
    char buf[512];
    if (std::floor(value) == value) {
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";  // tiny negatives round to zero
    return s;
}

double parse_decimal(std::string_view text) {
    if (text.empty()) throw ParseError("empty decimal");
    std::string owned(text);
    char* end = nullptr;
    double v = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size()) {
        throw ParseError("malformed decimal '" + owned + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError("non-finite decimal '" + owned + "'");
    }
    return v;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw ValidationError("value not representable");
    }
    return std::string(buf, ptr);
}

namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
    return fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw UsageError("Rng::below requires bound >= 1");
    // Rejection sampling over the largest multiple of bound.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

double Rng::unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace invdiff
