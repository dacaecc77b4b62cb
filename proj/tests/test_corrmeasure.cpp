#include "digitcorr/corrmeasure.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace digitcorr;

namespace {
Dyadic ratio(long num, std::int64_t exp) { return Dyadic(BigInt(num), exp); }
}

TEST_CASE("seed pair") {
    const MeasurePair seed = seed_pair();
    CHECK(seed.first.at(0) == Dyadic(1));
    CHECK(seed.first.at(1) == Dyadic(0));
    CHECK(seed.first.mass() == Dyadic(1));
    CHECK(seed.second.at(1) == ratio(1, 1));
    CHECK(seed.second.at(0) == ratio(1, 2));
    CHECK(seed.second.at(-3) == ratio(1, 5));
    CHECK(seed.second.at(2) == Dyadic(0));
    CHECK(seed.second.mass() == Dyadic(1));
}

TEST_CASE("pair_step reproduces the recurrences") {
    const MeasurePair seed = seed_pair();
    // mu_1 is a fixed point of the odd recursion applied to (mu_0, mu_1).
    CHECK(pair_step(seed, 1).first == seed.second);
    // Even digit keeps the first component untouched.
    const MeasurePair p2 = pair_step(seed, 0);
    CHECK(p2.first == seed.first);
    // (mu_1, mu_2) --1--> mu_3 with known values.
    const MeasurePair p12{seed.second, seed.second};  // mu_2 = mu_1
    const HybridMeasure mu3 = pair_step(p12, 1).first;
    CHECK(mu3.at(2) == ratio(1, 2));
    CHECK(mu3.at(0) == ratio(5, 4));
    CHECK(mu3.mass() == Dyadic(1));
}

TEST_CASE("measure_of collapses even factors") {
    const HybridMeasure mu1 = measure_of(DigitString::from_integer(1));
    CHECK(measure_of(DigitString::from_integer(2)) == mu1);
    CHECK(measure_of(DigitString::from_integer(4)) == mu1);
    CHECK(measure_of(DigitString::from_integer(3)).at(2) == ratio(1, 2));
}

TEST_CASE("moments") {
    for (std::uint64_t a : {1ull, 3ull, 7ull, 12ull, 41ull}) {
        const HybridMeasure mu = measure_of(DigitString::from_integer(a));
        CHECK(mu.moment(0) == Dyadic(1));
        CHECK(mu.moment(1) == Dyadic(0));
    }
    CHECK(measure_of(DigitString::from_integer(1)).moment(2) == Dyadic(2));
    CHECK_THROWS_AS(measure_of(DigitString::from_integer(1)).moment(65), BudgetError);
}

TEST_CASE("closed-form variance") {
    CHECK(variance_closed_form(DigitString::from_integer(1)) == Dyadic(2));
    // One leading zero: n = 2, same value.
    CHECK(variance_closed_form(DigitString({1, 0})) == Dyadic(2));
    for (std::uint64_t a = 1; a < 256; ++a) {
        const DigitString ds = DigitString::from_integer(a);
        CHECK(variance_closed_form(ds) == measure_of(ds).moment(2));
    }
}

TEST_CASE("leading-zero invariance") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::uint64_t> pick_a(1, (1u << 12) - 1);
    std::uniform_int_distribution<std::size_t> pick_pad(1, 8);
    for (int i = 0; i < 50; ++i) {
        const DigitString ds = DigitString::from_integer(pick_a(rng));
        const DigitString padded = ds.padded(pick_pad(rng));
        CHECK(measure_of(ds) == measure_of(padded));
        CHECK(variance_closed_form(ds) == variance_closed_form(padded));
    }
}

TEST_CASE("recurrence consistency over a range") {
    for (std::uint64_t a = 1; a < 256; ++a) {
        const HybridMeasure mu_a = measure_of(DigitString::from_integer(a));
        const HybridMeasure mu_a1 = measure_of(DigitString::from_integer(a + 1));
        const HybridMeasure odd = measure_of(DigitString::from_integer(2 * a + 1));
        CHECK(measure_of(DigitString::from_integer(2 * a)) == mu_a);
        for (std::int64_t d = -20; d <= 20; ++d)
            CHECK(odd.at(d) == (mu_a.at(d - 1) + mu_a1.at(d + 1)).halve());
        CHECK(mu_a.mass() == Dyadic(1));
    }
}

TEST_CASE("cusick quantity") {
    CHECK(cusick_c(DigitString::from_integer(1)) == ratio(3, 2));
    const Dyadic half = ratio(1, 1);
    for (std::uint64_t a = 1; a < 256; ++a) {
        const DigitString ds = DigitString::from_integer(a);
        CHECK(cusick_c(ds) == cusick_c(ds.reversed()));
        CHECK(cusick_c(ds) > half);
    }
}

TEST_CASE("for_each_measure agrees with measure_of") {
    std::size_t seen = 0;
    for_each_measure(6, [&](const std::vector<std::uint8_t>& digits, const HybridMeasure& mu) {
        ++seen;
        CHECK(mu == measure_of(DigitString(digits)));
    });
    CHECK(seen == 64);
}

TEST_CASE("dump format") {
    std::ostringstream os;
    HybridMeasure::delta0().dump(os);
    CHECK(os.str() == "0\t1/2^0\t1\nTAIL 0 0/2^0\n");
    std::ostringstream os1;
    HybridMeasure::mu1().dump(os1);
    CHECK(os1.str() == "TAIL 2 1/2^2\n");
}

TEST_CASE("digit string helpers") {
    const DigitString ds = DigitString::from_integer(6);  // digits 0,1,1
    CHECK(ds.size() == 3);
    CHECK(ds.sign_at(0) == -1);
    CHECK(ds.value() == 6);
    CHECK(ds.reversed().value() == 3);
    CHECK(ds.padded(2).value() == 6);
}
