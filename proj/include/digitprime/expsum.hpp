#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "digitprime/arith.hpp"
#include "digitprime/digitclass.hpp"
#include "digitprime/walsh.hpp"

namespace digitprime {

using Complex = std::complex<double>;

// S(lambda) = sum_k s_k e^{i lambda k}, lambda in [-pi, pi].
Complex exp_sum(const DigitClassSums& sums, double lambda);
Complex exp_sum(int n, double lambda, const StreamOptions& opts = {});

struct ExpSumSeries {
    int n = 0;
    std::vector<double> grid;
    std::vector<Complex> values;
};

ExpSumSeries exp_sum_series(const DigitClassSums& sums, std::vector<double> grid);

// lambda_t = 2 pi t / (n + 1), t = 0..n, folded into [-pi, pi].
std::vector<double> inversion_grid(int n);

// Recovers s_k from S on the inversion grid by finite Fourier inversion.
std::vector<double> recover_class_sums(const ExpSumSeries& series);

// Fourier coefficient of U_lambda(x) = e^{i lambda digit_sum(x)} at xi,
// evaluated as a product over digits in O(n).
Complex u_fourier_coefficient(int n, double lambda, std::uint64_t xi);

struct UFourierMax {
    double max = 0.0;
    std::uint64_t argmax = 0;
    bool exhaustive = false;
    std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kMinFourierSamples = std::uint64_t{1} << 12;

// max over xi of |U^_lambda(xi)|: exhaustive when 2^n <= sample_budget,
// otherwise one deterministic point per stratum of sample_budget strata.
UFourierMax u_fourier_max(int n, double lambda, std::uint64_t sample_budget);

// |w^_S(r)| for the 2^m-point DFT of w_S.
double walsh_char_fourier_magnitude(int m, SubsetMask s, std::uint64_t r);

struct RationalApprox {
    int m = 0;
    std::uint64_t r = 0;
    std::uint64_t a = 0;
    std::uint64_t q = 1;
    double theta = 0.0;  // r / 2^m - a / q
};

// Last continued-fraction convergent a/q of r / 2^m with q <= max_q, so
// |q r / 2^m - a| is minimal over q <= max_q and |theta| <= 1 / (q (max_q + 1)).
RationalApprox rational_scan(int m, std::uint64_t r, std::uint64_t max_q);

enum class BilinearMode { typeI, typeII };

struct BilinearSumConfig {
    int n = 0;
    int m1 = 0;  // M1 = 2^m1 <= M2 = 2^(n - m1)
    BilinearMode mode = BilinearMode::typeI;
    std::vector<double> a;  // a[x1 - M1], typeII only
    std::vector<double> b;  // b[x2 - M2], typeII only

    int m2() const { return n - m1; }
    // n, m1 only
    void validate_shape() const;
    void validate() const;

    static BilinearSumConfig type_one(int n, int m1);
    static BilinearSumConfig type_two_ones(int n, int m1);
    // a = mu on [M1, 2 M1), b = Lambda / ln(2 M2) on [M2, 2 M2).
    static BilinearSumConfig type_two_moebius_lambda(int n, int m1);
};

struct BilinearSumResult {
    double raw = 0.0;
    double normalized = 0.0;  // raw / 2^n
};

// typeI:  sum_{x1} | sum_{x2} U_lambda(x1 x2) |
// typeII: | sum_{x1, x2} a_{x1} b_{x2} U_lambda(x1 x2) |
// over the dyadic blocks x1 in [M1, 2 M1), x2 in [M2, 2 M2).
BilinearSumResult bilinear_sum(const BilinearSumConfig& config, double lambda);

}  // namespace digitprime
