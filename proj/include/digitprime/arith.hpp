#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "digitprime/budget.hpp"

namespace digitprime {

enum class ArithKind { vonMangoldt, moebius };

std::string_view to_string(ArithKind kind);
// Accepts "lambda", "vonmangoldt", "mu", "moebius".
ArithKind parse_arith_kind(std::string_view text);

// Largest bit-length supported by the streaming paths.
inline constexpr int kMaxStreamBits = 34;

struct StreamOptions {
    std::uint64_t segment_size = std::uint64_t{1} << 16;  // clamped to 2^n
    unsigned threads = 1;
};

inline int digit_sum(std::uint64_t x) { return std::popcount(x); }

// Dense table of Lambda or mu over [0, 2^n); index 0 holds 0.
class ArithTable {
public:
    ArithTable(int n, ArithKind kind, std::vector<double> values);

    // All-zero table, handy as a degenerate input.
    static ArithTable zeros(int n, ArithKind kind);

    int bits() const { return n_; }
    ArithKind kind() const { return kind_; }
    std::uint64_t size() const { return values_.size(); }
    double operator[](std::uint64_t x) const { return values_[x]; }
    std::span<const double> values() const { return values_; }

private:
    int n_;
    ArithKind kind_;
    std::vector<double> values_;
};

ArithTable sieve_table(int n, ArithKind kind, const Budget& budget = Budget::from_env());

struct SieveWindow {
    std::uint64_t index = 0;  // position in the tiling
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::span<const double> values;  // values[x - lo] for x in [lo, hi)

    double value(std::uint64_t x) const { return values[x - lo]; }
};

// Primes up to a limit, shared read-only between window fillers.
class BasePrimes {
public:
    explicit BasePrimes(std::uint64_t limit);
    std::span<const std::uint32_t> primes() const { return primes_; }

private:
    std::vector<std::uint32_t> primes_;
};

// Per-thread segmented sieve state. Windows are filled independently, so
// any number of fillers may share one BasePrimes.
class WindowFiller {
public:
    WindowFiller(std::shared_ptr<const BasePrimes> base, ArithKind kind);

    // Values for x in [lo, hi). The base primes must reach sqrt(hi).
    SieveWindow fill(std::uint64_t lo, std::uint64_t hi);

private:
    void fill_von_mangoldt(std::uint64_t lo, std::uint64_t hi);
    void fill_moebius(std::uint64_t lo, std::uint64_t hi);

    std::shared_ptr<const BasePrimes> base_;
    ArithKind kind_;
    std::vector<double> values_;
    std::vector<std::uint8_t> composite_;
    std::vector<std::uint64_t> product_;
};

// Tiling of [1, 2^n) into windows [i*seg, (i+1)*seg), the first one
// starting at 1 instead of 0.
struct WindowPlan {
    int n = 0;
    std::uint64_t segment = 0;
    std::uint64_t count = 0;

    WindowPlan(int n, const StreamOptions& opts);
    std::uint64_t lo(std::uint64_t i) const { return std::max<std::uint64_t>(1, i * segment); }
    std::uint64_t hi(std::uint64_t i) const { return (i + 1) * segment; }
};

namespace detail {

// Visits windows [first, first + count) of the plan, possibly on several
// threads. The visitor must only touch state owned by its window index.
void run_windows(const WindowPlan& plan, ArithKind kind,
                 const std::shared_ptr<const BasePrimes>& base, std::uint64_t first,
                 std::uint64_t count, unsigned threads,
                 const std::function<void(const SieveWindow&)>& visitor);

std::shared_ptr<const BasePrimes> base_primes_for_bits(int n);

}  // namespace detail

// Sequential visit of every window in ascending order.
void stream_windows(int n, ArithKind kind, std::uint64_t segment_size,
                    const std::function<void(const SieveWindow&)>& visitor);

// Maps every window to a partial result and folds the partials in
// ascending window order, regardless of how many threads did the mapping.
template <class T, class Map, class Fold>
T reduce_windows(int n, ArithKind kind, const StreamOptions& opts, T init, Map&& map, Fold&& fold) {
    const WindowPlan plan(n, opts);
    const auto base = detail::base_primes_for_bits(n);
    const unsigned threads = std::max(1u, opts.threads);
    const std::uint64_t batch = std::uint64_t{threads} * 16;
    using Partial = std::invoke_result_t<Map&, const SieveWindow&>;
    std::vector<std::optional<Partial>> slots;
    for (std::uint64_t first = 0; first < plan.count; first += batch) {
        const std::uint64_t count = std::min(batch, plan.count - first);
        slots.assign(count, std::nullopt);
        detail::run_windows(plan, kind, base, first, count, threads,
                            [&](const SieveWindow& w) { slots[w.index - first].emplace(map(w)); });
        for (auto& slot : slots) fold(init, std::move(*slot));
    }
    return init;
}

// psi = sum of Lambda(x) over 1 <= x < 2^n.
double chebyshev_psi(int n, const StreamOptions& opts = {});

}  // namespace digitprime
