#ifndef DIGITCORR_DYADIC_HPP
#define DIGITCORR_DYADIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace digitcorr {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown when an operation exceeds a documented budget or cap.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact rational with a power-of-two denominator: value = num / 2^exp,
/// exp >= 0. Normalized so that num is odd, or num == 0 and exp == 0, or
/// exp == 0 (integer values). All arithmetic is exact.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long v) : num_(v) {}
    Dyadic(BigInt num, std::int64_t exp);

    const BigInt& num() const { return num_; }
    std::int64_t exp() const { return exp_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    Dyadic operator-() const;
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    /// x / 2
    Dyadic halve() const { return shift_scale(-1); }
    /// x * 2^k, k may be negative
    Dyadic shift_scale(std::int64_t k) const;
    Dyadic abs() const { return num_ < 0 ? -*this : *this; }

    bool operator==(const Dyadic& o) const = default;
    std::strong_ordering operator<=>(const Dyadic& o) const;

    /// Nearest double, correct even when num has tens of thousands of bits.
    double to_double() const;
    /// Report rendering: "<num>/2^<exp>", e.g. "3/2^2".
    std::string str() const;

private:
    void normalize();

    BigInt num_ = 0;
    std::int64_t exp_ = 0;
};

/// Exact value of sum_{d=-inf}^{D-1} d^k 2^d. The inner constants
/// T_m = sum_{j>=1} j^m 2^{-j} are integers, computed by the recurrence
/// T_m = 1 + sum_{i<m} C(m,i) T_i. Cap: k <= 64.
Dyadic tail_power_sum(unsigned k, std::int64_t D);

}  // namespace digitcorr

#endif
