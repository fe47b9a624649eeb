#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "digitprime/arith.hpp"
#include "digitprime/budget.hpp"

namespace digitprime {

using Int128 = __int128;

// Bit j of the mask selects digit x_j (LSB = x_0).
using SubsetMask = std::uint64_t;

inline int level(SubsetMask s) { return std::popcount(s); }

// w_S(x) = prod_{j in S} (1 - 2 x_j) = (-1)^{|S & x|}
inline int walsh_character(SubsetMask s, std::uint64_t x) {
    return (std::popcount(s & x) & 1) != 0 ? -1 : 1;
}

std::string to_string(Int128 v);

// Exact C(n, k); throws ArithmeticOverflow past the 128-bit range.
Int128 binomial(int n, int k);

// Coefficients g^(S) = 2^-n sum_x g(x) w_S(x), indexed by mask.
class SpectrumVector {
public:
    SpectrumVector(int n, std::vector<double> coeffs);

    int bits() const { return n_; }
    std::uint64_t size() const { return coeffs_.size(); }
    double operator[](SubsetMask s) const { return coeffs_[s]; }
    std::span<const double> coeffs() const { return coeffs_; }
    static constexpr const char* normalization() { return "uniform-measure"; }

    // sum_S coeff(S)^2
    double energy() const;

private:
    int n_;
    std::vector<double> coeffs_;
};

// Unnormalized in-place butterfly: v <- H v, length a power of two.
void hadamard_inplace(std::span<double> v);

SpectrumVector fwht(std::span<const double> values, const Budget& budget = Budget::from_env());

// g(x) = sum_S g^(S) w_S(x)
std::vector<double> inverse_fwht(const SpectrumVector& spectrum);

// Single coefficient of Lambda or mu over [1, 2^n), one streaming pass.
double walsh_coefficient_streaming(int n, ArithKind kind, SubsetMask s,
                                   const StreamOptions& opts = {});

// All coefficients with |S| <= level_max, from one streaming pass: each
// aligned window is transformed locally and folded into the global
// coefficients through the high-digit characters.
struct LowLevelSpectrum {
    int n = 0;
    std::vector<SubsetMask> masks;  // ascending level, then ascending mask
    std::vector<double> coeffs;
};

LowLevelSpectrum low_level_coefficients_streaming(int n, ArithKind kind, int level_max,
                                                  const StreamOptions& opts = {});

// Every mask of [0, n) with the given popcount, in increasing order.
std::vector<SubsetMask> masks_of_level(int n, int k);

struct LevelWeights {
    int n = 0;
    std::vector<double> weights;  // W_k, k = 0..(size-1)
    double total() const;
};

LevelWeights level_weights(const SpectrumVector& spectrum);

// sum_{x in Omega_j} w_S(x) for any S with |S| = k.
Int128 krawtchouk_class_sum(int n, int k, int j);

// Level-k coefficient of the 0/1 majority function on n (odd) digits.
double majority_level_coefficient(int n, int k);

struct MajorityProfile {
    LevelWeights levels;       // W_k = C(n,k) f^(k)^2 for k <= k_max
    std::vector<double> tail;  // T_k = sum_{k' > k} W_k'
    bool tail_exact = false;   // false: tail from the Parseval total 1/2
};

MajorityProfile majority_spectrum_profile(int n, int k_max);

}  // namespace digitprime
