#include "digitprime/boolfn.hpp"

#include <cmath>
#include <stdexcept>

#include "digitprime/kahan.hpp"

namespace digitprime {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

SubsetMask full_mask(int n) { return n >= 64 ? ~SubsetMask{0} : (SubsetMask{1} << n) - 1; }

}  // namespace

BooleanFunctionSpec::BooleanFunctionSpec(int n, Variant variant) : n_(n), variant_(variant) {
    if (n < 1 || n > 63) throw std::invalid_argument("boolean function: n outside [1, 63]");
    std::visit(Overloaded{
                   [n](const Majority&) {
                       if (n % 2 == 0) throw std::invalid_argument("majority needs odd n");
                   },
                   [](const Parity&) {},
                   [n](const Dictator& d) {
                       if (d.index < 0 || d.index >= n) throw std::invalid_argument("dictator index outside [0, n)");
                   },
                   [n](const Threshold& t) {
                       if (t.threshold < 0 || t.threshold > n) throw std::invalid_argument("threshold outside [0, n]");
                   },
                   [n](const WalshCharacter& w) {
                       if ((w.mask & ~full_mask(n)) != 0) throw std::invalid_argument("walsh mask has digits beyond n");
                   },
               },
               variant_);
}

Codomain BooleanFunctionSpec::codomain() const {
    if (std::holds_alternative<Parity>(variant_) || std::holds_alternative<WalshCharacter>(variant_)) {
        return Codomain::plusMinusOne;
    }
    return Codomain::zeroOne;
}

bool BooleanFunctionSpec::symmetric() const {
    return std::visit(Overloaded{
                          [](const Majority&) { return true; },
                          [](const Parity&) { return true; },
                          [this](const Dictator&) { return n_ == 1; },
                          [](const Threshold&) { return true; },
                          [this](const WalshCharacter& w) { return w.mask == 0 || w.mask == full_mask(n_); },
                      },
                      variant_);
}

std::string BooleanFunctionSpec::name() const {
    return std::visit(Overloaded{
                          [](const Majority&) { return std::string("majority"); },
                          [](const Parity&) { return std::string("parity"); },
                          [](const Dictator& d) { return "dictator(" + std::to_string(d.index) + ")"; },
                          [](const Threshold& t) { return "threshold(" + std::to_string(t.threshold) + ")"; },
                          [](const WalshCharacter& w) { return "walsh(" + std::to_string(w.mask) + ")"; },
                      },
                      variant_);
}

int BooleanFunctionSpec::evaluate(std::uint64_t x) const {
    if (n_ < 64 && (x >> n_) != 0) throw std::invalid_argument("evaluate: x needs more than n digits");
    const int s = digit_sum(x);
    return std::visit(Overloaded{
                          [&](const Majority&) { return 2 * s > n_ ? 1 : 0; },
                          [&](const Parity&) { return (s & 1) != 0 ? -1 : 1; },
                          [&](const Dictator& d) { return static_cast<int>((x >> d.index) & 1); },
                          [&](const Threshold& t) { return s >= t.threshold ? 1 : 0; },
                          [&](const WalshCharacter& w) { return digitprime::walsh_character(w.mask, x); },
                      },
                      variant_);
}

double BooleanFunctionSpec::class_average(int k) const {
    if (!symmetric()) throw std::invalid_argument(name() + " is not symmetric");
    if (k < 0 || k > n_) throw std::invalid_argument("class_average: k outside [0, n]");
    return std::visit(Overloaded{
                          [&](const Majority&) { return 2 * k > n_ ? 1.0 : 0.0; },
                          [&](const Parity&) { return (k & 1) != 0 ? -1.0 : 1.0; },
                          [&](const Dictator&) { return static_cast<double>(k); },
                          [&](const Threshold& t) { return k >= t.threshold ? 1.0 : 0.0; },
                          [&](const WalshCharacter& w) {
                              if (w.mask == 0) return 1.0;
                              return (k & 1) != 0 ? -1.0 : 1.0;
                          },
                      },
                      variant_);
}

double correlate(const ArithTable& table, const BooleanFunctionSpec& spec) {
    if (table.bits() != spec.bits()) throw std::invalid_argument("correlate: bit-length mismatch");
    KahanSum total;
    const auto values = table.values();
    for (std::uint64_t x = 1; x < values.size(); ++x) {
        if (values[x] != 0.0) total.add(values[x] * spec.evaluate(x));
    }
    return total.value();
}

double correlate_streaming(ArithKind kind, const BooleanFunctionSpec& spec, const StreamOptions& opts) {
    const KahanSum total = reduce_windows(
        spec.bits(), kind, opts, KahanSum{},
        [&spec](const SieveWindow& w) {
            KahanSum part;
            for (std::uint64_t x = w.lo; x < w.hi; ++x) {
                const double v = w.value(x);
                if (v != 0.0) part.add(v * spec.evaluate(x));
            }
            return part;
        },
        [](KahanSum& acc, const KahanSum& part) { acc.merge(part); });
    return total.value();
}

NoiseParameter::NoiseParameter(double rho) : rho_(rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noise parameter rho outside [0, 1]");
}

SpectrumVector apply_noise(const SpectrumVector& spectrum, NoiseParameter rho) {
    const int n = spectrum.bits();
    std::vector<double> factor(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) factor[k] = std::pow(rho.value(), k);
    std::vector<double> coeffs(spectrum.coeffs().begin(), spectrum.coeffs().end());
    for (std::uint64_t s = 0; s < coeffs.size(); ++s) coeffs[s] *= factor[level(s)];
    return SpectrumVector(n, std::move(coeffs));
}

}  // namespace digitprime
