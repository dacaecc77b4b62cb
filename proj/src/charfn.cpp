#include "digitcorr/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace digitcorr {

PhaseMatrix PhaseMatrix::phase(int digit, double theta) {
    const Complex ep = std::polar(0.5, theta);    // e^{i theta}/2
    const Complex em = std::polar(0.5, -theta);   // e^{-i theta}/2
    PhaseMatrix r;
    if (digit == 0) {
        r.m[0][0] = 1.0; r.m[0][1] = 0.0;
        r.m[1][0] = ep;  r.m[1][1] = em;
    } else {
        r.m[0][0] = ep;  r.m[0][1] = em;
        r.m[1][0] = 0.0; r.m[1][1] = 1.0;
    }
    return r;
}

Complex mu1_hat(double theta) {
    return std::polar(1.0, theta) / (2.0 - std::polar(1.0, -theta));
}

Complex charfn_eval(const DigitString& a, double theta) {
    Complex row[2] = {1.0, 0.0};
    for (std::uint8_t d : a.digits) {
        const PhaseMatrix A = PhaseMatrix::phase(d, theta);
        const Complex r0 = row[0] * A.m[0][0] + row[1] * A.m[1][0];
        const Complex r1 = row[0] * A.m[0][1] + row[1] * A.m[1][1];
        row[0] = r0;
        row[1] = r1;
    }
    return row[0] + row[1] * mu1_hat(theta);
}

Complex charfn_exact_sum(const HybridMeasure& mu, double theta) {
    Complex s = 0.0;
    for (const auto& [d, v] : mu.finite_part())
        s += v.to_double() * std::polar(1.0, static_cast<double>(d) * theta);
    if (!mu.tail_coeff().is_zero()) {
        const auto D = static_cast<double>(mu.tail_threshold());
        s += mu.tail_coeff().to_double() * std::ldexp(1.0, static_cast<int>(mu.tail_threshold())) *
             std::polar(1.0, (D - 1.0) * theta) / (2.0 - std::polar(1.0, -theta));
    }
    return s;
}

TruncatedSeries TruncatedSeries::constant(Complex v, unsigned order) {
    TruncatedSeries s(order);
    s.c_[0] = v;
    return s;
}

TruncatedSeries TruncatedSeries::exp_itheta(int mult, unsigned order) {
    TruncatedSeries s(order);
    Complex term = 1.0;
    const Complex im(0.0, static_cast<double>(mult));
    for (unsigned k = 0; k <= order; ++k) {
        s.c_[k] = term;
        term *= im / static_cast<double>(k + 1);
    }
    return s;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(a.order());
    for (unsigned k = 0; k <= a.order(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(a.order());
    for (unsigned k = 0; k <= a.order(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(a.order());
    for (unsigned k = 0; k <= a.order(); ++k) {
        Complex acc = 0.0;
        for (unsigned j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
        r.c_[k] = acc;
    }
    return r;
}

TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (b.c_[0] == Complex(0.0)) throw std::invalid_argument("series division by non-invertible term");
    TruncatedSeries r(a.order());
    for (unsigned k = 0; k <= a.order(); ++k) {
        Complex acc = a.c_[k];
        for (unsigned j = 0; j < k; ++j) acc -= r.c_[j] * b.c_[k - j];
        r.c_[k] = acc / b.c_[0];
    }
    return r;
}

SeriesMatrix SeriesMatrix::phase_series(int digit, unsigned order) {
    SeriesMatrix r(order);
    const TruncatedSeries one = TruncatedSeries::constant(1.0, order);
    const TruncatedSeries zero(order);
    TruncatedSeries ep = TruncatedSeries::exp_itheta(1, order);
    TruncatedSeries em = TruncatedSeries::exp_itheta(-1, order);
    const TruncatedSeries half = TruncatedSeries::constant(0.5, order);
    ep = ep * half;
    em = em * half;
    if (digit == 0) {
        r.e[0][0] = one; r.e[0][1] = zero;
        r.e[1][0] = ep;  r.e[1][1] = em;
    } else {
        r.e[0][0] = ep;  r.e[0][1] = em;
        r.e[1][0] = zero; r.e[1][1] = one;
    }
    return r;
}

std::vector<double> moments_via_series(const DigitString& a, unsigned R) {
    if (R > 16) throw BudgetError("moments_via_series: order exceeds cap 16");
    TruncatedSeries row0 = TruncatedSeries::constant(1.0, R);
    TruncatedSeries row1(R);
    const SeriesMatrix A0 = SeriesMatrix::phase_series(0, R);
    const SeriesMatrix A1 = SeriesMatrix::phase_series(1, R);
    for (std::uint8_t d : a.digits) {
        const SeriesMatrix& A = d ? A1 : A0;
        TruncatedSeries n0 = row0 * A.e[0][0] + row1 * A.e[1][0];
        TruncatedSeries n1 = row0 * A.e[0][1] + row1 * A.e[1][1];
        row0 = std::move(n0);
        row1 = std::move(n1);
    }
    const TruncatedSeries mu1 =
        TruncatedSeries::exp_itheta(1, R) /
        (TruncatedSeries::constant(2.0, R) - TruncatedSeries::exp_itheta(-1, R));
    const TruncatedSeries total = row0 + row1 * mu1;

    std::vector<double> m(R + 1);
    double fact = 1.0;
    const Complex inv_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};  // (1/i)^r
    for (unsigned r = 0; r <= R; ++r) {
        if (r > 0) fact *= static_cast<double>(r);
        const Complex mr = total.coeff(r) * fact * inv_i_pow[r % 4];
        if (std::abs(mr.imag()) > 1e-9 * std::max(1.0, std::abs(mr.real())))
            throw std::runtime_error("moments_via_series: imaginary residue above tolerance");
        m[r] = mr.real();
    }
    return m;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.e[i][j] = a.e[i][0] * b.e[0][j] + a.e[i][1] * b.e[1][j];
    return r;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e[i][j] = a.e[i][j] + b.e[i][j];
    return r;
}

Dyadic RatMatrix::norm() const {
    const Dyadic r0 = e[0][0].abs() + e[0][1].abs();
    const Dyadic r1 = e[1][0].abs() + e[1][1].abs();
    return r0 < r1 ? r1 : r0;
}

namespace constmat {

namespace {
const Dyadic kHalf{BigInt(1), 1};
RatMatrix make(Dyadic a, Dyadic b, Dyadic c, Dyadic d) {
    RatMatrix m;
    m.e[0][0] = std::move(a);
    m.e[0][1] = std::move(b);
    m.e[1][0] = std::move(c);
    m.e[1][1] = std::move(d);
    return m;
}
}  // namespace

RatMatrix I(int j) {
    return j == 0 ? make(1, 0, kHalf, kHalf) : make(kHalf, kHalf, 0, 1);
}

RatMatrix alpha(int j) {
    return j == 0 ? make(0, 0, kHalf, -kHalf) : make(kHalf, -kHalf, 0, 0);
}

RatMatrix beta(int j) {
    return j == 0 ? make(0, 0, kHalf, kHalf) : make(kHalf, kHalf, 0, 0);
}

RatMatrix P() { return make(1, 1, -1, 1); }

RatMatrix Pinv() { return make(kHalf, -kHalf, kHalf, kHalf); }

RatMatrix Itilde(int j) {
    const Dyadic bh = j == 1 ? kHalf : -kHalf;  // b_j / 2
    return make(1, bh, 0, kHalf);
}

RatMatrix betatilde(int j) {
    const Dyadic bh = j == 1 ? kHalf : -kHalf;
    return make(kHalf, 0, -bh, 0);
}

}  // namespace constmat

TypeSum enumerate_type_sum(std::span<const std::uint8_t> X, unsigned n, unsigned p, unsigned q) {
    if (n > 16 || X.size() < n) throw BudgetError("enumerate_type_sum: n exceeds cap 16 or prefix too short");
    const unsigned t = p + q;
    if (t > n) return TypeSum{};  // no such word
    double budget = 1.0;
    for (unsigned i = 0; i < t; ++i) budget *= static_cast<double>(n - i) / (i + 1);
    for (unsigned i = 0; i < p; ++i) budget *= static_cast<double>(t - i) / (i + 1);
    if (budget > 1e7) throw BudgetError("enumerate_type_sum: enumeration budget exceeded");

    RatMatrix identity;
    identity.e[0][0] = identity.e[1][1] = Dyadic(1);

    TypeSum out;
    out.matrix_sum = RatMatrix{};

    std::vector<unsigned> pos(t);
    for (unsigned i = 0; i < t; ++i) pos[i] = i;
    std::vector<RatMatrix> seg(t + 1);

    auto run_subset = [&]() {
        // Products of I-factors between the chosen positions. The factors
        // past the last chosen position act trivially on the evaluation
        // vector and are omitted, so each word ends at its last alpha/beta.
        unsigned cur = 0;
        for (unsigned j = 0; j <= t; ++j) {
            RatMatrix m = identity;
            const unsigned end = j < t ? pos[j] : (t == 0 ? n : cur);
            for (unsigned k = cur; k < end; ++k) m = m * constmat::I(X[k]);
            seg[j] = m;
            cur = end + 1;
        }
        // Every way of marking p of the chosen positions as alpha.
        std::vector<std::uint8_t> mark(t, 0);
        std::fill(mark.begin(), mark.begin() + p, 1);
        std::sort(mark.begin(), mark.end());
        do {
            RatMatrix m = seg[0];
            for (unsigned j = 0; j < t; ++j) {
                const RatMatrix s = mark[j] ? constmat::alpha(X[pos[j]]) : constmat::beta(X[pos[j]]);
                m = m * s * seg[j + 1];
            }
            out.matrix_sum = out.matrix_sum + m;
            out.norm_sum += m.norm();
        } while (std::next_permutation(mark.begin(), mark.end()));
    };

    if (t == 0) {
        run_subset();
        return out;
    }
    while (true) {
        run_subset();
        // next combination of positions
        int j = static_cast<int>(t) - 1;
        while (j >= 0 && pos[static_cast<unsigned>(j)] == n - t + static_cast<unsigned>(j)) --j;
        if (j < 0) break;
        ++pos[static_cast<unsigned>(j)];
        for (unsigned k = static_cast<unsigned>(j) + 1; k < t; ++k) pos[k] = pos[k - 1] + 1;
    }
    return out;
}

ABPair extract_AB(std::span<const std::uint8_t> X, unsigned n, unsigned r) {
    if (r < 1 || r > 5) throw BudgetError("extract_AB: order must be in [1,5]");
    if (X.size() < n) throw std::invalid_argument("extract_AB: prefix too short");
    const Dyadic half{BigInt(1), 1};
    auto sign = [&](unsigned i) { return X[i] ? 1 : -1; };

    // A[s] holds A_{n-s}(sigma^s X, 2*rho) across the sweep; rho = 0 is the
    // empty product, so A = 1 for every suffix including the empty one. A
    // beta placed at offset m of the suffix consumes positions s..s+m, and
    // the remaining factor starts at s+m+1.
    std::vector<Dyadic> prev(n + 1, Dyadic(1)), next(n + 1);
    for (unsigned rho = 1; rho <= r; ++rho) {
        for (unsigned s = 0; s <= n; ++s) {
            Dyadic g;  // sum_{i<m} b_{s+i} 2^{-(m-i)}
            Dyadic acc;
            for (unsigned m = 0; s + m < n; ++m) {
                const int b = sign(s + m);
                const Dyadic w = b > 0 ? half - g.halve() : half + g.halve();
                acc += w * prev[s + m + 1];
                g = b > 0 ? (g + Dyadic(1)).halve() : (g - Dyadic(1)).halve();
            }
            next[s] = std::move(acc);
        }
        if (rho < r) prev = next;
    }
    ABPair out;
    out.A = next[0];
    for (unsigned m = 0; m < n; ++m) {
        const Dyadic term = prev[m + 1].shift_scale(-static_cast<std::int64_t>(m) - 1);
        out.B = sign(m) > 0 ? out.B - term : out.B + term;
    }
    return out;
}

std::pair<double, double> extract_AB_approx(std::span<const std::uint8_t> X, unsigned n, unsigned r) {
    if (r < 1 || r > 5) throw BudgetError("extract_AB_approx: order must be in [1,5]");
    if (X.size() < n) throw std::invalid_argument("extract_AB_approx: prefix too short");
    auto sign = [&](unsigned i) { return X[i] ? 1.0 : -1.0; };
    std::vector<double> prev(n + 1, 1.0), next(n + 1);
    for (unsigned rho = 1; rho <= r; ++rho) {
        for (unsigned s = 0; s <= n; ++s) {
            double g = 0.0, acc = 0.0;
            for (unsigned m = 0; s + m < n; ++m) {
                const double b = sign(s + m);
                acc += (0.5 - 0.5 * b * g) * prev[s + m + 1];
                g = 0.5 * (g + b);
            }
            next[s] = acc;
        }
        if (rho < r) prev = next;
    }
    double B = 0.0;
    for (unsigned m = 0; m < n; ++m) B -= sign(m) * std::ldexp(prev[m + 1], -static_cast<int>(m) - 1);
    return {next[0], B};
}

}  // namespace digitcorr
