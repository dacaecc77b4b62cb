#include "digitcorr/dyadic.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <sstream>
#include <vector>

namespace digitcorr {

Dyadic::Dyadic(BigInt num, std::int64_t exp) : num_(std::move(num)), exp_(exp) {
    if (exp_ < 0) {
        num_ <<= static_cast<unsigned>(-exp_);
        exp_ = 0;
    }
    normalize();
}

void Dyadic::normalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    if (exp_ > 0) {
        const auto tz = static_cast<std::int64_t>(boost::multiprecision::lsb(boost::multiprecision::abs(num_)));
        const auto shift = tz < exp_ ? tz : exp_;
        if (shift > 0) {
            num_ >>= static_cast<unsigned>(shift);
            exp_ -= shift;
        }
    }
}

Dyadic Dyadic::operator-() const {
    Dyadic r;
    r.num_ = -num_;
    r.exp_ = exp_;
    return r;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const std::int64_t e = std::max(a.exp_, b.exp_);
    BigInt n = (a.num_ << static_cast<unsigned>(e - a.exp_)) + (b.num_ << static_cast<unsigned>(e - b.exp_));
    return Dyadic(std::move(n), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    const std::int64_t e = std::max(a.exp_, b.exp_);
    BigInt n = (a.num_ << static_cast<unsigned>(e - a.exp_)) - (b.num_ << static_cast<unsigned>(e - b.exp_));
    return Dyadic(std::move(n), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
}

Dyadic Dyadic::shift_scale(std::int64_t k) const {
    if (num_ == 0) return Dyadic();
    return Dyadic(num_, exp_ - k);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    const int s = (*this - o).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Dyadic::to_double() const {
    if (num_ == 0) return 0.0;
    const BigInt a = boost::multiprecision::abs(num_);
    const auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(a)) + 1;
    if (bits <= 62) {
        return std::ldexp(static_cast<double>(a.convert_to<std::int64_t>()) * sign(),
                          static_cast<int>(-exp_));
    }
    // Keep the top 62 bits, track the discarded scale.
    const std::int64_t drop = bits - 62;
    const BigInt top = a >> static_cast<unsigned>(drop);
    const std::int64_t scale = drop - exp_;
    if (scale > 2000) return sign() > 0 ? HUGE_VAL : -HUGE_VAL;
    if (scale < -1100000) return 0.0;
    return std::ldexp(static_cast<double>(top.convert_to<std::int64_t>()) * sign(),
                      static_cast<int>(scale));
}

std::string Dyadic::str() const {
    std::ostringstream os;
    os << num_ << "/2^" << exp_;
    return os.str();
}

Dyadic tail_power_sum(unsigned k, std::int64_t D) {
    if (k > 64) throw BudgetError("tail_power_sum: k exceeds cap 64");
    // T[m] = sum_{j>=1} j^m 2^{-j}, an integer for every m.
    std::vector<BigInt> T(k + 1);
    std::vector<std::vector<BigInt>> C(k + 1, std::vector<BigInt>(k + 1, 0));
    for (unsigned m = 0; m <= k; ++m) {
        C[m][0] = 1;
        for (unsigned i = 1; i <= m; ++i) C[m][i] = C[m - 1][i - 1] + (i <= m - 1 ? C[m - 1][i] : 0);
    }
    for (unsigned m = 0; m <= k; ++m) {
        BigInt t = 1;
        for (unsigned i = 0; i < m; ++i) t += C[m][i] * T[i];
        T[m] = t;
    }
    // sum_{d<D} d^k 2^d = 2^D sum_{j>=1} (D-j)^k 2^{-j}
    //                   = 2^D sum_m C(k,m) D^(k-m) (-1)^m T[m].
    BigInt acc = 0;
    const BigInt d(D);
    for (unsigned m = 0; m <= k; ++m) {
        BigInt pw = 1;
        for (unsigned j = 0; j < k - m; ++j) pw *= d;
        BigInt term = C[k][m] * pw * T[m];
        if (m % 2 == 1) term = -term;
        acc += term;
    }
    return Dyadic(std::move(acc), 0).shift_scale(D);
}

}  // namespace digitcorr
