#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace digitprime {

// Thrown when a dense allocation would exceed the configured memory cap.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an exact integer computation leaves the representable range.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline constexpr std::uint64_t kDefaultMaxMemory = 4ull << 30;  // 4 GiB
inline constexpr int kDefaultMaxDenseBits = 26;

// Resource limits for dense (2^n-sized) allocations. Streaming paths only
// allocate per-window buffers and are not subject to max_dense_bits.
struct Budget {
    std::uint64_t max_bytes = kDefaultMaxMemory;
    int max_dense_bits = kDefaultMaxDenseBits;

    // Default cap, overridden by DIGITPRIME_MAX_MEM when set.
    static Budget from_env();

    // Parses "1073741824", "512M", "4G", "64k" (binary multiples).
    static std::uint64_t parse_bytes(const std::string& text);

    // Throws BudgetExceeded unless a dense array of 2^n elements of
    // elem_bytes each fits.
    void require_dense(int n, std::uint64_t elem_bytes, const char* what) const;
};

}  // namespace digitprime
