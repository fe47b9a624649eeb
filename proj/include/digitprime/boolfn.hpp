#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "digitprime/arith.hpp"
#include "digitprime/walsh.hpp"

namespace digitprime {

// 1 iff more than half of the n (odd) digits are 1.
struct Majority {};
// (-1)^{digit sum}
struct Parity {};
// x_index
struct Dictator {
    int index = 0;
};
// 1 iff digit sum >= threshold; threshold 0 is the constant 1.
struct Threshold {
    int threshold = 0;
};
// w_S as a +-1 function.
struct WalshCharacter {
    SubsetMask mask = 0;
};

enum class Codomain { zeroOne, plusMinusOne };

class BooleanFunctionSpec {
public:
    using Variant = std::variant<Majority, Parity, Dictator, Threshold, WalshCharacter>;

    // Validates the variant against n; throws std::invalid_argument.
    BooleanFunctionSpec(int n, Variant variant);

    static BooleanFunctionSpec majority(int n) { return {n, Majority{}}; }
    static BooleanFunctionSpec parity(int n) { return {n, Parity{}}; }
    static BooleanFunctionSpec dictator(int n, int j) { return {n, Dictator{j}}; }
    static BooleanFunctionSpec threshold(int n, int t) { return {n, Threshold{t}}; }
    static BooleanFunctionSpec walsh_character(int n, SubsetMask s) { return {n, WalshCharacter{s}}; }

    int bits() const { return n_; }
    const Variant& variant() const { return variant_; }
    Codomain codomain() const;
    // Depends on x only through its digit sum.
    bool symmetric() const;
    std::string name() const;

    int evaluate(std::uint64_t x) const;

    // Mean over Omega_k; requires a symmetric spec.
    double class_average(int k) const;

private:
    int n_;
    Variant variant_;
};

// sum_{1 <= x < 2^n} table(x) f(x)
double correlate(const ArithTable& table, const BooleanFunctionSpec& spec);

// Same sum without a dense table.
double correlate_streaming(ArithKind kind, const BooleanFunctionSpec& spec,
                           const StreamOptions& opts = {});

class NoiseParameter {
public:
    explicit NoiseParameter(double rho);
    double value() const { return rho_; }

private:
    double rho_;
};

// T_rho: scales each level-k coefficient by rho^k.
SpectrumVector apply_noise(const SpectrumVector& spectrum, NoiseParameter rho);

}  // namespace digitprime
