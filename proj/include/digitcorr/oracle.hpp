#ifndef DIGITCORR_ORACLE_HPP
#define DIGITCORR_ORACLE_HPP

#include <cstdint>
#include <vector>

namespace digitcorr {

/// s_2(n+a) - s_2(n). When crosscheck is set, independently recomputes the
/// value as s_2(a) - carries(n, a) and throws std::logic_error on mismatch.
int digit_delta(std::uint64_t n, std::uint64_t a, bool crosscheck = false);

struct DensityEstimate {
    std::uint64_t a;
    std::int64_t d;
    std::uint64_t N;
    std::uint64_t count;
    double density;
};

struct DensityScan {
    std::vector<DensityEstimate> in_window;  // ascending d, one row per d in [d_lo, d_hi]
    std::uint64_t out_of_window = 0;
    std::uint64_t N = 0;
    std::int64_t d_lo = 0, d_hi = 0;
    std::uint64_t kummer_checks = 0;
    std::uint64_t kummer_mismatches = 0;
};

/// Histogram of digit_delta over n in [0, N), clipped to [d_lo, d_hi] with
/// an explicit out-of-window bucket. Deterministic, independent of the
/// partitioning into worker threads. The Kummer carry cross-check runs on
/// one n in 1024. Budget: N <= 2^34.
DensityScan density_scan(std::uint64_t a, std::uint64_t N, std::int64_t d_lo, std::int64_t d_hi,
                         unsigned jobs = 1);

}  // namespace digitcorr

#endif
