#ifndef DIGITCORR_CLTLAB_HPP
#define DIGITCORR_CLTLAB_HPP

#include "digitcorr/corrmeasure.hpp"
#include "digitcorr/ergodic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace digitcorr {

/// Moments of the standard normal: (2k)!/(2^k k!) for order 2k, 0 for odd
/// orders. r <= 20.
BigInt gaussian_moment(unsigned r);

struct ExperimentPlan {
    SourceSpec source;
    std::vector<std::size_t> n_grid;  // increasing
    unsigned max_order = 6;           // moment orders 1..R, R <= 10
    bool exact_mode = true;           // exact measures (and CDFs) where n <= 2^12
    unsigned truncation = 40;         // P for V_nu
    unsigned jobs = 1;

    static std::vector<std::size_t> doubling_grid(std::size_t lo, std::size_t hi);
};

struct MomentRow {
    std::size_t n;
    unsigned r;
    double m_raw;
    double m_renorm;
    double target;
    double ks;  // KS distance for this n (repeated across its rows)
};

struct MomentReport {
    std::string source;
    std::uint64_t seed = 0;
    double vnu = 0.0;
    std::vector<MomentRow> rows;
    /// Largest relative disagreement between the series and exact moment
    /// paths over the grid points where both ran.
    double max_path_reldiff = 0.0;
};

/// Central-limit experiment: moments of mu_{a_X(n)} renormalized by
/// (V_nu n)^{r/2} across the grid, plus KS distances to the standard normal.
/// Throws std::invalid_argument on a degenerate source.
MomentReport run_clt(const ExperimentPlan& plan);

/// KS distance between the renormalized CDF of mu (x = d / scale) and the
/// standard normal CDF.
double ks_distance_to_normal(const HybridMeasure& mu, double scale);

/// | A_n(X,2r) - sum_{1<=p_1..p_r<=P} 2^{-sum p} S_n(X,p) |: how closely the
/// truncated correlation sums track the even-moment coefficient. r <= 3.
double truncation_gap(BitStream& X, std::size_t n, unsigned r, unsigned P);

struct CusickScan {
    BigInt limit;
    Dyadic min_c;
    BigInt argmin;
    bool conjecture_holds = true;    // every scanned c_a > 1/2
    std::vector<BigInt> violations;  // reported as findings, not errors
    bool reversal_ok = true;         // c_a == c_{reverse(a)} for a < 2^10
    std::vector<Dyadic> trajectory;  // c_{a_k}, a_k = sum_{j<=k} 4^j, k = 1..12
    bool trajectory_monotone = true;
};

/// Scans c_a for 1 <= a < 2^nbits. nbits <= 20.
CusickScan cusick_scan(unsigned nbits);

/// 17-significant-digit float rendering used by every report.
std::string fmt17(double v);

/// Deterministic CSV report: comment header (version, config echo, seed)
/// then one row per (n, r).
std::string clt_report_csv(const MomentReport& report, const std::string& config_echo);
std::string clt_report_json(const MomentReport& report, const std::string& config_echo);

}  // namespace digitcorr

#endif
