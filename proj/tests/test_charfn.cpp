#include "digitcorr/charfn.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace digitcorr;

namespace {

Dyadic ratio(long num, std::int64_t exp) { return Dyadic(BigInt(num), exp); }

RatMatrix conjugate(const RatMatrix& m) { return constmat::P() * m * constmat::Pinv(); }

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    return bits;
}

double binomial(unsigned n, unsigned k) {
    double v = 1.0;
    for (unsigned i = 0; i < k; ++i) v *= static_cast<double>(n - i) / (i + 1);
    return v;
}

}  // namespace

TEST_CASE("charfn at zero and for mu_1") {
    for (std::uint64_t a : {1ull, 5ull, 12ull, 77ull}) {
        const Complex v = charfn_eval(DigitString::from_integer(a), 0.0);
        CHECK(std::abs(v - Complex(1.0)) < 1e-14);
    }
    for (int i = 0; i < 200; ++i) {
        const double theta = 2.0 * M_PI * i / 200.0;
        CHECK(std::abs(charfn_eval(DigitString::from_integer(1), theta) - mu1_hat(theta)) < 1e-12);
    }
}

TEST_CASE("charfn matches the exact Fourier sum") {
    for (std::uint64_t a = 1; a < 64; ++a) {
        const DigitString ds = DigitString::from_integer(a);
        const HybridMeasure mu = measure_of(ds);
        for (int i = 0; i < 32; ++i) {
            const double theta = 2.0 * M_PI * i / 32.0 + 0.01;
            CHECK(std::abs(charfn_eval(ds, theta) - charfn_exact_sum(mu, theta)) < 1e-10);
            CHECK(std::abs(charfn_eval(ds, theta)) < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("constant matrices") {
    for (int j = 0; j < 2; ++j) {
        const RatMatrix I = constmat::I(j), al = constmat::alpha(j), be = constmat::beta(j);
        // alpha_j (1,1)^T = 0 and I_j (1,1)^T = (1,1)^T
        CHECK(al.e[0][0] + al.e[0][1] == Dyadic(0));
        CHECK(al.e[1][0] + al.e[1][1] == Dyadic(0));
        CHECK(I.e[0][0] + I.e[0][1] == Dyadic(1));
        CHECK(I.e[1][0] + I.e[1][1] == Dyadic(1));
        CHECK(conjugate(I) == constmat::Itilde(j));
        CHECK(conjugate(be) == constmat::betatilde(j));
        CHECK(I.norm() == Dyadic(1));
        CHECK(al.norm() == Dyadic(1));
        CHECK(be.norm() == Dyadic(1));
    }
    // P P^{-1} = identity
    const RatMatrix id = constmat::P() * constmat::Pinv();
    CHECK(id.e[0][0] == Dyadic(1));
    CHECK(id.e[0][1] == Dyadic(0));
    CHECK(id.e[1][0] == Dyadic(0));
    CHECK(id.e[1][1] == Dyadic(1));
}

TEST_CASE("series expansion of the phase matrices") {
    for (int j = 0; j < 2; ++j) {
        const SeriesMatrix s = SeriesMatrix::phase_series(j, 2);
        const RatMatrix I = constmat::I(j), al = constmat::alpha(j), be = constmat::beta(j);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                CHECK(std::abs(s.e[r][c].coeff(0) - Complex(I.e[r][c].to_double())) < 1e-15);
                CHECK(std::abs(s.e[r][c].coeff(1) - Complex(0, al.e[r][c].to_double())) < 1e-15);
                CHECK(std::abs(s.e[r][c].coeff(2) - Complex(-0.5 * be.e[r][c].to_double())) < 1e-15);
            }
    }
    // mu_1 series starts 1 - theta^2 + O(theta^3)
    const TruncatedSeries mu1 = TruncatedSeries::exp_itheta(1, 3) /
                                (TruncatedSeries::constant(2.0, 3) - TruncatedSeries::exp_itheta(-1, 3));
    CHECK(std::abs(mu1.coeff(0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(mu1.coeff(1)) < 1e-15);
    CHECK(std::abs(mu1.coeff(2) - Complex(-1.0)) < 1e-15);
}

TEST_CASE("series moments") {
    for (std::uint64_t a : {1ull, 3ull, 10ull, 99ull}) {
        const auto m = moments_via_series(DigitString::from_integer(a), 6);
        CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m[1]) < 1e-9);
    }
    CHECK(moments_via_series(DigitString::from_integer(1), 4)[2] == doctest::Approx(2.0).epsilon(1e-12));
    for (std::uint64_t a = 1; a < 128; ++a) {
        const DigitString ds = DigitString::from_integer(a);
        const double exact = variance_closed_form(ds).to_double();
        CHECK(moments_via_series(ds, 2)[2] == doctest::Approx(exact).epsilon(1e-8));
    }
    CHECK_THROWS_AS(moments_via_series(DigitString::from_integer(1), 17), BudgetError);
}

TEST_CASE("type sums: stochastic words") {
    const auto bits = random_bits(12, 7);
    const TypeSum s = enumerate_type_sum(bits, 12, 0, 0);
    CHECK(s.norm_sum == Dyadic(1));
    // p = 0: sum of norms bounded by C(n, q)
    for (unsigned q = 1; q <= 3; ++q) {
        const TypeSum t = enumerate_type_sum(bits, 12, 0, q);
        CHECK(t.norm_sum <= Dyadic(static_cast<long>(std::llround(binomial(12, q)))));
    }
}

TEST_CASE("type sums: weight trend for mixed types") {
    for (auto [p, q] : {std::pair{1u, 1u}, {2u, 1u}, {1u, 2u}}) {
        double worst = 0.0;
        for (unsigned n = 4; n <= 14; ++n) {
            const auto bits = random_bits(n, 1000 + n);
            const TypeSum t = enumerate_type_sum(bits, n, p, q);
            worst = std::max(worst, t.norm_sum.to_double() / std::pow(n, q));
        }
        CHECK(worst < 16.0);  // weight at most q: the ratio stays bounded
    }
}

TEST_CASE("extract_AB equals the basis-changed enumeration") {
    for (unsigned trial = 0; trial < 10; ++trial) {
        const auto bits = random_bits(12, 500 + trial);
        for (unsigned n : {4u, 8u, 12u})
            for (unsigned r = 1; r <= 3; ++r) {
                const TypeSum t = enumerate_type_sum(bits, n, 0, r);
                const RatMatrix conj = conjugate(t.matrix_sum);
                CHECK(conj.e[0][1] == Dyadic(0));
                CHECK(conj.e[1][1] == Dyadic(0));
                const ABPair ab = extract_AB(bits, n, r);
                CHECK(ab.A == conj.e[0][0]);
                CHECK(ab.B == conj.e[1][0]);
            }
    }
}

TEST_CASE("extract_AB first-order closed form") {
    for (unsigned trial = 0; trial < 20; ++trial) {
        const auto bits = random_bits(16, 9000 + trial);
        const unsigned n = 16;
        // A_n(2) = n/2 - sum_j (b_j/2) sum_i b_i 2^{-(j-i)}
        Dyadic expect = Dyadic(static_cast<long>(n)).halve();
        for (unsigned j = 0; j < n; ++j) {
            Dyadic inner;
            for (unsigned i = 0; i < j; ++i) {
                const Dyadic term = Dyadic(1).shift_scale(-static_cast<std::int64_t>(j - i));
                inner = bits[i] ? inner + term : inner - term;
            }
            const Dyadic scaled = inner.halve();
            expect = bits[j] ? expect - scaled : expect + scaled;
        }
        const ABPair ab = extract_AB(bits, n, 1);
        CHECK(ab.A == expect);
        CHECK(ab.B.abs() < Dyadic(1));
    }
}

TEST_CASE("extract_AB approximate path agrees") {
    const auto bits = random_bits(64, 4242);
    for (unsigned r = 1; r <= 3; ++r) {
        const ABPair exact = extract_AB(bits, 64, r);
        const auto [a, b] = extract_AB_approx(bits, 64, r);
        CHECK(a == doctest::Approx(exact.A.to_double()).epsilon(1e-11));
        CHECK(b == doctest::Approx(exact.B.to_double()).epsilon(1e-11));
    }
}

TEST_CASE("budgets") {
    const auto bits = random_bits(17, 1);
    CHECK_THROWS_AS(enumerate_type_sum(bits, 17, 0, 1), BudgetError);
    CHECK_THROWS_AS(extract_AB(bits, 8, 6), BudgetError);
}
