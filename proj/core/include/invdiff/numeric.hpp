#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace invdiff {

// Canonical decimal rendering shared by trace files and invariant texts.
// Integer-valued numbers print without a fractional part; everything else
// prints with at most six fractional digits, trailing zeros trimmed.
// The mapping is idempotent: format_decimal(parse_decimal(s)) == s for any
// string it produced.
std::string format_decimal(double value);

// Strict parse of a decimal written by format_decimal (or any plain decimal
// literal). Throws ParseError on trailing garbage, NaN or infinity.
double parse_decimal(std::string_view text);

// Shortest round-trip rendering (std::to_chars) for analysis artifacts
// where full precision matters (distances CSV, density curves).
std::string format_double(double value);

// FNV-1a, 64-bit. The reference string hash of the toolkit: fixed offset
// basis 14695981039346656037 and prime 1099511628211, bytes folded in order.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);

// Deterministic PRNG used everywhere randomness is needed. Wraps
// std::mt19937_64 (whose raw output is pinned by the standard) and draws
// bounded integers with explicit rejection sampling, since the standard
// distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform draw in [0, bound). bound must be >= 1.
    std::uint64_t below(std::uint64_t bound);
    double unit();  // uniform in [0, 1)

private:
    std::mt19937_64 engine_;
};

}  // namespace invdiff
