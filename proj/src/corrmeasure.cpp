#include "digitcorr/corrmeasure.hpp"

#include <bit>
#include <cstdio>

namespace digitcorr {

DigitString DigitString::from_integer(const BigInt& a) {
    DigitString s;
    BigInt v = a;
    if (v == 0) {
        s.digits.push_back(0);
        return s;
    }
    while (v > 0) {
        s.digits.push_back(static_cast<std::uint8_t>(v & 1));
        v >>= 1;
    }
    return s;
}

BigInt DigitString::value() const {
    BigInt v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) v = (v << 1) + digits[i];
    return v;
}

DigitString DigitString::reversed() const {
    DigitString s;
    s.digits.assign(digits.rbegin(), digits.rend());
    return s;
}

DigitString DigitString::padded(std::size_t k) const {
    DigitString s = *this;
    s.digits.insert(s.digits.end(), k, 0);
    return s;
}

HybridMeasure HybridMeasure::delta0() {
    HybridMeasure m;
    m.finite_[0] = Dyadic(1);
    m.canonicalize();
    return m;
}

HybridMeasure HybridMeasure::mu1() {
    HybridMeasure m;
    m.tail_coeff_ = Dyadic(BigInt(1), 2);  // 1/4
    m.tail_threshold_ = 2;
    return m;
}

void HybridMeasure::canonicalize() {
    for (auto it = finite_.begin(); it != finite_.end();) {
        if (it->second.is_zero())
            it = finite_.erase(it);
        else
            ++it;
    }
    if (tail_coeff_.is_zero()) {
        tail_threshold_ = finite_.empty() ? 0 : finite_.begin()->first;
        return;
    }
    // Absorb finite entries that continue the geometric law.
    while (true) {
        auto it = finite_.find(tail_threshold_);
        if (it == finite_.end() || it->second != tail_coeff_.shift_scale(tail_threshold_)) break;
        finite_.erase(it);
        ++tail_threshold_;
    }
}

Dyadic HybridMeasure::at(std::int64_t d) const {
    if (d < tail_threshold_) return tail_coeff_.shift_scale(d);
    auto it = finite_.find(d);
    return it == finite_.end() ? Dyadic() : it->second;
}

Dyadic HybridMeasure::mass() const {
    Dyadic s = tail_coeff_.shift_scale(tail_threshold_);
    for (const auto& [d, v] : finite_) s += v;
    return s;
}

Dyadic HybridMeasure::moment(unsigned k) const {
    if (k > 64) throw BudgetError("moment: order exceeds cap 64");
    Dyadic s = tail_coeff_.is_zero() ? Dyadic() : tail_coeff_ * tail_power_sum(k, tail_threshold_);
    for (const auto& [d, v] : finite_) {
        BigInt pw = 1;
        const BigInt base(d);
        for (unsigned j = 0; j < k; ++j) pw *= base;
        s += v * Dyadic(pw, 0);
    }
    return s;
}

Dyadic HybridMeasure::cusick() const {
    Dyadic s;
    if (!tail_coeff_.is_zero() && tail_threshold_ > 0) {
        // sum_{0 <= d < D} t 2^d = t (2^D - 1)
        s = tail_coeff_ * Dyadic((BigInt(1) << static_cast<unsigned>(tail_threshold_)) - 1, 0);
    }
    for (const auto& [d, v] : finite_)
        if (d >= 0) s += v;
    return s;
}

HybridMeasure HybridMeasure::shifted(int s) const {
    HybridMeasure r;
    for (const auto& [d, v] : finite_) r.finite_[d + s] = v;
    r.tail_threshold_ = tail_threshold_ + s;
    r.tail_coeff_ = tail_coeff_.shift_scale(-s);
    r.canonicalize();
    return r;
}

HybridMeasure HybridMeasure::average(const HybridMeasure& a, const HybridMeasure& b) {
    HybridMeasure r;
    // Canonical thresholds (a zero tail sits at the minimum support point),
    // so the common threshold is simply the minimum.
    const std::int64_t D = std::min(a.tail_threshold_, b.tail_threshold_);
    auto add_half = [&](const HybridMeasure& m) {
        for (const auto& [d, v] : m.finite_) r.finite_[d] += v.halve();
        // Materialize the part of m's tail at or above the common threshold.
        if (!m.tail_coeff_.is_zero())
            for (std::int64_t d = D; d < m.tail_threshold_; ++d)
                r.finite_[d] += m.tail_coeff_.shift_scale(d).halve();
        r.tail_coeff_ += m.tail_coeff_.halve();
    };
    r.tail_threshold_ = D;
    add_half(a);
    add_half(b);
    r.canonicalize();
    return r;
}

void HybridMeasure::dump(std::ostream& os) const {
    char buf[64];
    for (auto it = finite_.rbegin(); it != finite_.rend(); ++it) {
        std::snprintf(buf, sizeof buf, "%.17g", it->second.to_double());
        os << it->first << '\t' << it->second.str() << '\t' << buf << '\n';
    }
    os << "TAIL " << tail_threshold_ << ' ' << tail_coeff_.str() << '\n';
}

MeasurePair seed_pair() {
    return MeasurePair{HybridMeasure::delta0(), HybridMeasure::mu1()};
}

MeasurePair pair_step(const MeasurePair& pair, int digit) {
    HybridMeasure odd =
        HybridMeasure::average(pair.first.shifted(+1), pair.second.shifted(-1));
    if (digit == 0) return MeasurePair{pair.first, std::move(odd)};
    return MeasurePair{std::move(odd), pair.second};
}

HybridMeasure measure_of(const DigitString& a) {
    MeasurePair p = seed_pair();
    for (std::size_t i = a.digits.size(); i-- > 0;) p = pair_step(p, a.digits[i]);
    return p.first;
}

Dyadic variance_closed_form(const DigitString& a) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    // Var = n/2 + 1 - 2^{-n} - (1/2) sum_{i=1}^{n-1} 2^{-i} c_i
    //       + sum_{k=0}^{n-1} (b_k + b_{n-1-k}) 2^{-(k+1)}
    // with c_i = sum_k b_{k+i} b_k = (n-i) - 2 * #{k : a_k != a_{k+i}}.
    // Assembled over the common denominator 2^n. Lag correlations are
    // computed word-parallel on the packed digit string.
    const std::size_t words = (a.size() + 63) / 64;
    std::vector<std::uint64_t> x(words + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.digits[i]) x[i / 64] |= std::uint64_t(1) << (i % 64);

    BigInt N = BigInt(n) << static_cast<unsigned>(n - 1);  // n/2
    N += BigInt(1) << static_cast<unsigned>(n);            // +1
    N -= 1;                                                // -2^{-n}

    std::vector<std::uint64_t> sh(words + 1);
    for (std::int64_t i = 1; i < n; ++i) {
        // sh = x >> i (bitwise across words)
        const std::size_t wi = static_cast<std::size_t>(i) / 64, bi = static_cast<std::size_t>(i) % 64;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t lo = (w + wi < words) ? x[w + wi] : 0;
            std::uint64_t hi = (w + wi + 1 < words) ? x[w + wi + 1] : 0;
            sh[w] = bi ? (lo >> bi) | (hi << (64 - bi)) : lo;
        }
        std::int64_t mism = 0;
        const std::int64_t len = n - i;  // valid k range
        for (std::size_t w = 0; w * 64 < static_cast<std::size_t>(len); ++w) {
            std::uint64_t diff = x[w] ^ sh[w];
            const std::int64_t rem = len - static_cast<std::int64_t>(w) * 64;
            if (rem < 64) diff &= (std::uint64_t(1) << rem) - 1;
            mism += std::popcount(diff);
        }
        const std::int64_t c_i = (n - i) - 2 * mism;
        // -(1/2) * c_i * 2^{-i} over denominator 2^n: subtract c_i 2^{n-1-i}
        if (c_i >= 0)
            N -= BigInt(c_i) << static_cast<unsigned>(n - 1 - i);
        else
            N += BigInt(-c_i) << static_cast<unsigned>(n - 1 - i);
    }
    for (std::int64_t k = 0; k < n; ++k) {
        const int s = a.sign_at(static_cast<std::size_t>(k)) + a.sign_at(static_cast<std::size_t>(n - 1 - k));
        if (s > 0)
            N += BigInt(s) << static_cast<unsigned>(n - 1 - k);
        else if (s < 0)
            N -= BigInt(-s) << static_cast<unsigned>(n - 1 - k);
    }
    return Dyadic(std::move(N), n);
}

Dyadic cusick_c(const DigitString& a) { return measure_of(a).cusick(); }

namespace {

void dfs(std::vector<std::uint8_t>& digits, std::size_t depth, const MeasurePair& pair,
         const std::function<void(const std::vector<std::uint8_t>&, const HybridMeasure&)>& visit) {
    if (depth == 0) {
        visit(digits, pair.first);
        return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
        digits[depth - 1] = static_cast<std::uint8_t>(bit);
        dfs(digits, depth - 1, pair_step(pair, bit), visit);
    }
}

}  // namespace

void for_each_measure(unsigned nbits,
                      const std::function<void(const std::vector<std::uint8_t>&, const HybridMeasure&)>& visit) {
    std::vector<std::uint8_t> digits(nbits, 0);
    if (nbits == 0) {
        visit(digits, HybridMeasure::delta0());
        return;
    }
    dfs(digits, nbits, seed_pair(), visit);
}

}  // namespace digitcorr
