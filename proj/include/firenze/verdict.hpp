#pragma once

#include <cstdint>
#include <string>

#include "firenze/errors.hpp"

namespace firenze {

// A single marker's opinion about a single sample.  Markers are weak,
// one-sided signals: they may vote malicious (+1), vote benign (-1), or
// abstain (0) when their precondition does not hold.
enum class Verdict : std::int8_t {
    benign = -1,
    abstain = 0,
    malicious = 1,
};

constexpr int verdict_value(Verdict v) noexcept { return static_cast<int>(v); }

// Parses the on-disk integer encoding.  Anything outside {-1,0,1} is a
// validation error, so a corrupted file cannot silently become an abstain.
inline Verdict verdict_from_int(long long v) {
    switch (v) {
    case -1: return Verdict::benign;
    case 0: return Verdict::abstain;
    case 1: return Verdict::malicious;
    default:
        throw validation_error("verdict must be -1, 0 or 1, got " + std::to_string(v));
    }
}

// Majority-vote collapse of a verdict sum: the sign of the sum, with exact
// ties mapping to abstain.
constexpr Verdict sign_verdict(long long sum) noexcept {
    if (sum > 0) return Verdict::malicious;
    if (sum < 0) return Verdict::benign;
    return Verdict::abstain;
}

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::benign: return "-1";
    case Verdict::abstain: return "0";
    case Verdict::malicious: return "1";
    }
    return "?";
}

} // namespace firenze
