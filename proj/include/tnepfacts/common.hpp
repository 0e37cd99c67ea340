#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace tnepfacts {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Malformed input file (bad JSON/CSV syntax, wrong column layout, ...).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally well-formed input that breaks a data invariant
// (dangling bus id, non-positive reactance, ...). The message names
// the offending entity.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem exceeds the documented desk-scale limits of the reference engine.
struct EngineLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic RNG wrapper. std::mt19937_64 output is fully specified by
// the standard; the distribution helpers below avoid std::uniform_*_distribution,
// whose output is implementation-defined, so streams are reproducible across
// compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    // Uniform integer in [lo, hi], inclusive. Modulo bias is irrelevant here;
    // determinism is what matters.
    long uniform_int(long lo, long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(gen_() % span);
    }

    bool coin(double p_true = 0.5) { return uniform(0.0, 1.0) < p_true; }

private:
    std::mt19937_64 gen_;
};

// Locale-independent float formatting with 17 significant digits
// (round-trip safe; used by every text emitter for deterministic output).
inline std::string format_double(double v) {
    if (v == 0.0) return "0";  // normalize negative zero
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("float formatting failed");
    return std::string(buf, ptr);
}

// Locale-independent float parsing.
inline double parse_double(const std::string& tok, const std::string& context) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError("cannot parse number '" + tok + "' in " + context);
    return v;
}

inline bool nearly_equal(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace tnepfacts
