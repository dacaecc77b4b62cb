#include "digitcorr/oracle.hpp"

#include "digitcorr/dyadic.hpp"

#include <bit>
#include <stdexcept>
#include <thread>

namespace digitcorr {

namespace {

// Carry count of the binary addition n + a, simulated bit by bit.
int carry_count(std::uint64_t n, std::uint64_t a) {
    int carries = 0;
    unsigned carry = 0;
    while (n || a || carry) {
        const unsigned s = static_cast<unsigned>(n & 1) + static_cast<unsigned>(a & 1) + carry;
        carry = s >> 1;
        carries += static_cast<int>(carry);
        n >>= 1;
        a >>= 1;
    }
    return carries;
}

}  // namespace

int digit_delta(std::uint64_t n, std::uint64_t a, bool crosscheck) {
    const int d = std::popcount(n + a) - std::popcount(n);
    if (crosscheck) {
        const int d2 = std::popcount(a) - carry_count(n, a);
        if (d != d2) throw std::logic_error("digit_delta: Kummer cross-check mismatch");
    }
    return d;
}

DensityScan density_scan(std::uint64_t a, std::uint64_t N, std::int64_t d_lo, std::int64_t d_hi,
                         unsigned jobs) {
    if (N > (std::uint64_t(1) << 34)) throw BudgetError("density_scan: N exceeds budget 2^34");
    if (d_hi < d_lo) throw std::invalid_argument("density_scan: empty window");
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    const std::size_t width = static_cast<std::size_t>(d_hi - d_lo + 1);
    struct Part {
        std::vector<std::uint64_t> hist;
        std::uint64_t out = 0;
        std::uint64_t checks = 0;
        std::uint64_t mismatches = 0;
    };
    std::vector<Part> parts(jobs);

    auto work = [&](unsigned w) {
        Part& part = parts[w];
        part.hist.assign(width, 0);
        const std::uint64_t lo = N * w / jobs, hi = N * (w + 1) / jobs;
        for (std::uint64_t n = lo; n < hi; ++n) {
            const int d = std::popcount(n + a) - std::popcount(n);
            if ((n & 1023) == 0) {
                ++part.checks;
                if (d != std::popcount(a) - carry_count(n, a)) ++part.mismatches;
            }
            if (d >= d_lo && d <= d_hi)
                ++part.hist[static_cast<std::size_t>(d - d_lo)];
            else
                ++part.out;
        }
    };

    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }

    DensityScan scan;
    scan.N = N;
    scan.d_lo = d_lo;
    scan.d_hi = d_hi;
    std::vector<std::uint64_t> hist(width, 0);
    for (const Part& part : parts) {
        for (std::size_t i = 0; i < width; ++i) hist[i] += part.hist[i];
        scan.out_of_window += part.out;
        scan.kummer_checks += part.checks;
        scan.kummer_mismatches += part.mismatches;
    }
    for (std::size_t i = 0; i < width; ++i) {
        const auto d = d_lo + static_cast<std::int64_t>(i);
        scan.in_window.push_back(
            {a, d, N, hist[i], static_cast<double>(hist[i]) / static_cast<double>(N)});
    }
    return scan;
}

}  // namespace digitcorr
