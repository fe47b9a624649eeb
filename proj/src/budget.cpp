#include "digitprime/budget.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>

namespace digitprime {

Budget Budget::from_env() {
    Budget b;
    if (const char* env = std::getenv("DIGITPRIME_MAX_MEM"); env != nullptr && *env != '\0') {
        b.max_bytes = parse_bytes(env);
    }
    return b;
}

std::uint64_t Budget::parse_bytes(const std::string& text) {
    if (text.empty() || !std::isdigit(static_cast<unsigned char>(text.front()))) {
        throw std::invalid_argument("invalid byte count: '" + text + "'");
    }
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid byte count: '" + text + "'");
    }
    std::uint64_t scale = 1;
    const std::string suffix = text.substr(used);
    if (suffix.empty() || suffix == "B") {
        scale = 1;
    } else if (suffix == "k" || suffix == "K" || suffix == "KiB") {
        scale = 1ull << 10;
    } else if (suffix == "M" || suffix == "MiB") {
        scale = 1ull << 20;
    } else if (suffix == "G" || suffix == "GiB") {
        scale = 1ull << 30;
    } else {
        throw std::invalid_argument("invalid byte count suffix: '" + text + "'");
    }
    if (value > std::numeric_limits<std::uint64_t>::max() / scale) {
        throw std::invalid_argument("byte count out of range: '" + text + "'");
    }
    return value * scale;
}

void Budget::require_dense(int n, std::uint64_t elem_bytes, const char* what) const {
    if (n > max_dense_bits) {
        throw BudgetExceeded(std::string(what) + ": n=" + std::to_string(n) +
                             " exceeds dense limit n<=" + std::to_string(max_dense_bits));
    }
    if (n >= 63 || elem_bytes > (max_bytes >> n)) {
        throw BudgetExceeded(std::string(what) + ": 2^" + std::to_string(n) + " x " +
                             std::to_string(elem_bytes) + " bytes exceeds cap of " +
                             std::to_string(max_bytes) + " bytes");
    }
}

}  // namespace digitprime
