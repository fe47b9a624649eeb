#pragma once

#include <vector>

#include "digitprime/arith.hpp"
#include "digitprime/boolfn.hpp"

namespace digitprime {

// s_k = sum of Lambda(x) over 1 <= x < 2^n with digit sum k.
struct DigitClassSums {
    int n = 0;
    std::vector<double> s;  // k = 0..n
    double psi = 0.0;       // sum_k s_k
};

DigitClassSums digit_class_sums(int n, const StreamOptions& opts = {});
DigitClassSums digit_class_sums(const ArithTable& table);
// From already bucketed sums; psi is recomputed.
DigitClassSums make_digit_class_sums(int n, std::vector<double> s);

// Value of the symmetrized function on Omega_k: s_k / C(n, k).
double symmetrized_value(const DigitClassSums& sums, int k);

// sum_k s_k * (mean of f over Omega_k)
double symmetrized_inner_product(const DigitClassSums& sums, const BooleanFunctionSpec& spec);

inline constexpr int kMaxMomentOrder = 8;

// sum_k s_k |n/2 - k|^{2R}, 0 <= R <= 8.
double central_moment(const DigitClassSums& sums, int order);

struct TailReport {
    double delta = 0.0;
    double mass = 0.0;        // sum of s_k with |k - n/2| >= delta sqrt(n)
    double normalized = 0.0;  // mass / 2^n
};

TailReport tail_mass(const DigitClassSums& sums, double delta);

// max of s_k / 2^n over |k - n/2| <= window sqrt(n).
double max_central_class(const DigitClassSums& sums, double window);

}  // namespace digitprime
