#ifndef DIGITCORR_CORRMEASURE_HPP
#define DIGITCORR_CORRMEASURE_HPP

#include "digitcorr/dyadic.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <vector>

namespace digitcorr {

/// Binary digits a_0..a_n, least significant first. Leading (most
/// significant) zeros are allowed and ignored by value().
struct DigitString {
    std::vector<std::uint8_t> digits;

    DigitString() = default;
    explicit DigitString(std::vector<std::uint8_t> d) : digits(std::move(d)) {}

    static DigitString from_integer(const BigInt& a);
    static DigitString from_integer(std::uint64_t a) { return from_integer(BigInt(a)); }

    std::size_t size() const { return digits.size(); }
    /// b_i = 2 a_i - 1
    int sign_at(std::size_t i) const { return digits[i] ? 1 : -1; }
    BigInt value() const;
    DigitString reversed() const;
    /// Append k most-significant zero digits.
    DigitString padded(std::size_t k) const;
};

/// Probability measure on Z with finite support on [D, d_max] plus an
/// exact geometric tail mu(d) = t * 2^d for every d < D.
class HybridMeasure {
public:
    static HybridMeasure delta0();
    static HybridMeasure mu1();

    Dyadic at(std::int64_t d) const;
    Dyadic mass() const;
    /// Exact sum_d d^k mu(d); k <= 64.
    Dyadic moment(unsigned k) const;
    /// Exact sum_{d>=0} mu(d).
    Dyadic cusick() const;

    /// Support shifted by s in {-1,+1}: result(d) = (*this)(d - s).
    HybridMeasure shifted(int s) const;
    static HybridMeasure average(const HybridMeasure& a, const HybridMeasure& b);

    const std::map<std::int64_t, Dyadic>& finite_part() const { return finite_; }
    std::int64_t tail_threshold() const { return tail_threshold_; }
    const Dyadic& tail_coeff() const { return tail_coeff_; }

    bool operator==(const HybridMeasure& o) const = default;

    /// One line per support point "d <TAB> dyadic <TAB> float", descending d,
    /// then "TAIL D t".
    void dump(std::ostream& os) const;

private:
    void canonicalize();

    std::map<std::int64_t, Dyadic> finite_;
    std::int64_t tail_threshold_ = 0;
    Dyadic tail_coeff_;
};

struct MeasurePair {
    HybridMeasure first;   // mu_a
    HybridMeasure second;  // mu_{a+1}
};

/// (mu_0, mu_1)
MeasurePair seed_pair();
/// digit 0: (mu_a, mu_{a+1}) -> (mu_2a, mu_{2a+1}); digit 1: -> (mu_{2a+1}, mu_{2a+2}).
MeasurePair pair_step(const MeasurePair& pair, int digit);
/// Folds pair_step over the digits, most significant first, from seed_pair().
HybridMeasure measure_of(const DigitString& a);

/// Exact closed-form variance of mu_a; n is the supplied digit-string
/// length, leading zeros included.
Dyadic variance_closed_form(const DigitString& a);

/// c_a = sum_{d>=0} mu_a(d)
Dyadic cusick_c(const DigitString& a);

/// Visits every digit string of length nbits (all a in [0, 2^nbits)),
/// sharing pair_step work along common most-significant prefixes. The
/// callback receives a (as LSB-first digits) and mu_a.
void for_each_measure(unsigned nbits,
                      const std::function<void(const std::vector<std::uint8_t>&, const HybridMeasure&)>& visit);

}  // namespace digitcorr

#endif
