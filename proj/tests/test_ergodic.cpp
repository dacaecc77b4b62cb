#include "digitcorr/ergodic.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

using namespace digitcorr;

namespace {

SourceSpec src(const std::string& descriptor, std::uint64_t seed = 1) {
    return SourceSpec::parse(descriptor, seed);
}

// Brute-force oracle for the multi-index sum: recurse over all increasing
// index tuples directly.
BigInt s_n_brute(BitStream& X, std::size_t n, const std::vector<unsigned>& p) {
    const std::size_t r = p.size();
    std::vector<std::size_t> offset(r, 0);  // offset[i] = p_{i+2} + ... + p_r
    for (std::size_t i = 0; i + 1 < r; ++i)
        for (std::size_t l = i + 1; l < r; ++l) offset[i] += p[l];
    std::vector<std::size_t> j(r);
    BigInt total = 0;
    auto rec = [&](auto&& self, std::size_t level, std::size_t lo) -> void {
        if (level == r) {
            int prod = 1;
            for (std::size_t i = 0; i < r && prod; ++i)
                prod *= f_indicator(X, p[i], offset[i] + j[r - 1 - i]);
            total += prod;
            return;
        }
        for (std::size_t v = lo; v < n; ++v) {
            j[level] = v;
            self(self, level + 1, v + 1);
        }
    };
    rec(rec, 0, 0);
    return total;
}

}  // namespace

TEST_CASE("source descriptor parsing") {
    const SourceSpec b = src("bernoulli:0.3");
    CHECK(b.kind == SourceSpec::Kind::bernoulli);
    CHECK(b.p == doctest::Approx(0.3));
    const SourceSpec m = src("markov:0.1,0.4");
    CHECK(m.kind == SourceSpec::Kind::markov);
    CHECK(m.p01 == doctest::Approx(0.1));
    CHECK(m.p10 == doctest::Approx(0.4));
    CHECK(m.stationary()[0] == doctest::Approx(0.8));
    CHECK(m.stationary()[1] == doctest::Approx(0.2));
    const SourceSpec per = src("periodic:0110");
    CHECK(per.kind == SourceSpec::Kind::periodic);
    CHECK(per.word == std::vector<std::uint8_t>{0, 1, 1, 0});
    CHECK_THROWS_AS(src("bernoulli:1.5"), std::invalid_argument);
    CHECK_THROWS_AS(src("markov:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(src("periodic:"), std::invalid_argument);
    CHECK_THROWS_AS(src("bogus:1"), std::invalid_argument);
}

TEST_CASE("bit streams are deterministic and seekable") {
    BitStream a(src("bernoulli:0.5", 42));
    BitStream b(src("bernoulli:0.5", 42));
    BitStream c(src("bernoulli:0.5", 43));
    // Access b out of order; the streams must still agree bit for bit.
    (void)b.bit(999);
    bool all_equal = true, any_diff = false;
    for (std::size_t k = 0; k < 1000; ++k) {
        all_equal = all_equal && (a.bit(k) == b.bit(k));
        any_diff = any_diff || (a.bit(k) != c.bit(k));
    }
    CHECK(all_equal);
    CHECK(any_diff);

    BitStream per(src("periodic:011"));
    CHECK(per.bit(0) == 0);
    CHECK(per.bit(1) == 1);
    CHECK(per.bit(2) == 1);
    CHECK(per.bit(3) == 0);
    CHECK(per.bit(301) == 1);
}

TEST_CASE("markov streams obey the chain empirically") {
    BitStream x(src("markov:1,1", 7));
    // p01 = p10 = 1 forces strict alternation after the first bit.
    for (std::size_t k = 0; k + 1 < 200; ++k) CHECK(x.bit(k) != x.bit(k + 1));
}

TEST_CASE("f_indicator") {
    BitStream x(src("periodic:01"));
    CHECK(f_indicator(x, 1, 0) == 1);
    CHECK(f_indicator(x, 2, 0) == 0);
    CHECK(f_indicator(x, 3, 5) == 1);
}

TEST_CASE("analytic correlations") {
    for (unsigned i = 1; i <= 10; ++i) {
        CHECK(analytic_F(src("bernoulli:0.5"), i) == doctest::Approx(0.5));
        CHECK(analytic_F(src("bernoulli:0.3"), i) == doctest::Approx(2 * 0.3 * 0.7));
    }
    // Deterministic alternating chain: F_i = 1 for odd i, 0 for even i.
    const SourceSpec alt = src("markov:1,1");
    for (unsigned i = 1; i <= 8; ++i) CHECK(analytic_F(alt, i) == doctest::Approx(i % 2 ? 1.0 : 0.0));
    // Periodic 0110: mismatch fractions by direct count.
    const SourceSpec per = src("periodic:0110");
    CHECK(analytic_F(per, 1) == doctest::Approx(0.5));
    CHECK(analytic_F(per, 2) == doctest::Approx(1.0));
    CHECK(analytic_F(per, 4) == doctest::Approx(0.0));
    CHECK_THROWS_AS(analytic_F(SourceSpec{SourceSpec::Kind::file}, 1), std::invalid_argument);
}

TEST_CASE("analytic F matches long-run empirical frequencies") {
    for (const char* d : {"bernoulli:0.3", "markov:0.2,0.5"}) {
        const SourceSpec spec = src(d, 2024);
        BitStream x(spec);
        const std::size_t n = 200000;
        for (unsigned i = 1; i <= 4; ++i) {
            std::size_t hits = 0;
            for (std::size_t k = 0; k < n; ++k) hits += f_indicator(x, i, k);
            CHECK(static_cast<double>(hits) / n == doctest::Approx(analytic_F(spec, i)).epsilon(0.02));
        }
    }
}

TEST_CASE("asymptotic variance") {
    const CorrelationTable half = asymptotic_variance(src("bernoulli:0.5"), 40);
    CHECK(std::abs(half.V - 0.5) <= std::ldexp(1.0, -40));
    CHECK(half.remainder_bound == doctest::Approx(std::ldexp(1.0, -40)));
    CHECK_FALSE(half.degenerate);
    CHECK_FALSE(half.empirical);

    const CorrelationTable dead = asymptotic_variance(src("periodic:0"), 40);
    CHECK(dead.degenerate);
    CHECK(dead.V == doctest::Approx(0.0));

    const CorrelationTable emp = asymptotic_variance_empirical(src("bernoulli:0.3", 11), 20, 500000);
    const CorrelationTable ana = asymptotic_variance(src("bernoulli:0.3"), 20);
    CHECK(emp.empirical);
    CHECK(emp.V == doctest::Approx(ana.V).epsilon(0.02));
}

TEST_CASE("multi-index sums: closed forms") {
    BitStream alt(src("periodic:01"));
    CHECK(s_n_sum(alt, 100, {1}) == BigInt(100));
    // Every f_1 value is 1, so the r = 2 sum counts increasing pairs.
    CHECK(s_n_sum(alt, 100, {1, 1}) == BigInt(100 * 99 / 2));
    BitStream alt2(src("periodic:01"));
    CHECK(s_n_sum(alt2, 50, {2}) == BigInt(0));
    BitStream ones(src("periodic:1"));
    CHECK(s_n_sum(ones, 64, {1, 2, 3}) == BigInt(0));
}

TEST_CASE("multi-index sums match the brute-force oracle") {
    for (const char* d : {"bernoulli:0.5", "markov:0.3,0.6", "periodic:0110100"}) {
        const SourceSpec spec = src(d, 99);
        for (const auto& p : std::vector<std::vector<unsigned>>{{1}, {2}, {1, 1}, {2, 1}, {1, 3}, {1, 1, 2}}) {
            BitStream x(spec);
            BitStream y(spec);
            for (std::size_t n : {5ul, 9ul, 16ul}) CHECK(s_n_sum(x, n, p) == s_n_brute(y, n, p));
        }
    }
}

TEST_CASE("birkhoff averages approach the ergodic limit") {
    const auto rows = birkhoff_multi_check(src("bernoulli:0.5", 5), {1, 2}, {256, 1024, 4096, 16384});
    REQUIRE(rows.size() == 4);
    // target = (1/2!) * F_1 * F_2 = 1/8 for the fair coin
    for (const auto& row : rows) CHECK(row.target == doctest::Approx(0.125));
    const double err_first = std::abs(rows.front().ratio - rows.front().target);
    const double err_last = std::abs(rows.back().ratio - rows.back().target);
    CHECK(err_last < 0.01);
    CHECK(err_last <= err_first + 0.005);
}

TEST_CASE("file sources round-trip") {
    const char* path = "ergodic_bits.tmp";
    {
        std::ofstream out(path);
        out << "0110 1\n01";
    }
    const SourceSpec spec = src(std::string("file:") + path);
    BitStream x(spec);
    const std::vector<int> expect{0, 1, 1, 0, 1, 0, 1};
    for (std::size_t k = 0; k < expect.size(); ++k) CHECK(x.bit(k) == expect[k]);
    CHECK_FALSE(spec.has_analytic());
    std::remove(path);
    CHECK_THROWS_AS(src("file:/no/such/file.bits"), std::invalid_argument);
}
