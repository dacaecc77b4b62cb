#include "digitcorr/cltlab.hpp"

#include "digitcorr/charfn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>

namespace digitcorr {

namespace {
constexpr const char* kVersion = "digitcorr 0.1.0";

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

BigInt gaussian_moment(unsigned r) {
    if (r > 20) throw BudgetError("gaussian_moment: order exceeds cap 20");
    if (r % 2 == 1) return 0;
    // (2k)!/(2^k k!) = (2k-1)!!
    BigInt v = 1;
    for (unsigned j = 1; j < r; j += 2) v *= j;
    return v;
}

std::vector<std::size_t> ExperimentPlan::doubling_grid(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> g;
    for (std::size_t n = lo; n <= hi; n *= 2) g.push_back(n);
    return g;
}

namespace {

// Double-precision mirror of HybridMeasure for lengths past the exact
// budget: contiguous weights from `lo`, geometric tail below holding total
// mass `tail_mass` (so mu(d) = tail_mass * 2^{d - lo} for d < lo). Storing
// the mass rather than the coefficient keeps the representation finite
// while the threshold drifts across thousands of shifts.
struct FloatMeasure {
    std::int64_t lo = 0;
    std::vector<double> w;
    double tail_mass = 0.0;

    FloatMeasure shifted(int s) const {
        FloatMeasure r = *this;
        r.lo += s;  // the mass below the shifted threshold is unchanged
        return r;
    }

    static FloatMeasure average(const FloatMeasure& a, const FloatMeasure& b) {
        FloatMeasure r;
        r.lo = std::min(a.lo, b.lo);
        const std::int64_t hi =
            std::max(a.lo + static_cast<std::int64_t>(a.w.size()), b.lo + static_cast<std::int64_t>(b.w.size()));
        r.w.assign(static_cast<std::size_t>(hi - r.lo), 0.0);
        auto add_half = [&](const FloatMeasure& m) {
            for (std::size_t i = 0; i < m.w.size(); ++i)
                r.w[static_cast<std::size_t>(m.lo - r.lo) + i] += 0.5 * m.w[i];
            for (std::int64_t d = r.lo; d < m.lo; ++d)
                r.w[static_cast<std::size_t>(d - r.lo)] +=
                    0.5 * std::ldexp(m.tail_mass, static_cast<int>(d - m.lo));
            r.tail_mass += 0.5 * std::ldexp(m.tail_mass, static_cast<int>(r.lo - m.lo));
        };
        add_half(a);
        add_half(b);
        return r;
    }
};

FloatMeasure float_measure_of(const DigitString& a) {
    FloatMeasure mu0;  // delta_0
    mu0.lo = 0;
    mu0.w = {1.0};
    FloatMeasure mu1;  // pure tail 2^{d-2} below 2, total mass 1
    mu1.lo = 2;
    mu1.tail_mass = 1.0;
    FloatMeasure first = mu0, second = mu1;
    for (std::size_t i = a.digits.size(); i-- > 0;) {
        FloatMeasure odd = FloatMeasure::average(first.shifted(+1), second.shifted(-1));
        if (a.digits[i] == 0)
            second = std::move(odd);  // (mu_2a, mu_{2a+1})
        else
            first = std::move(odd);   // (mu_{2a+1}, mu_{2a+2})
    }
    return first;
}

double ks_from_points(std::int64_t lo, const std::vector<double>& mass, double below, double scale) {
    double cdf = below;
    double ks = std::abs(cdf - normal_cdf((static_cast<double>(lo) - 0.5) / scale));
    for (std::size_t i = 0; i < mass.size(); ++i) {
        const double x = static_cast<double>(lo + static_cast<std::int64_t>(i)) / scale;
        const double phi = normal_cdf(x);
        ks = std::max(ks, std::abs(cdf - phi));  // left limit
        cdf += mass[i];
        ks = std::max(ks, std::abs(cdf - phi));
    }
    return ks;
}

constexpr int kTailDepth = 80;  // materialized tail points below the threshold

}  // namespace

double ks_distance_to_normal(const HybridMeasure& mu, double scale) {
    std::int64_t lo = mu.tail_threshold();
    std::int64_t hi = lo;
    if (!mu.finite_part().empty()) hi = std::max(hi, mu.finite_part().rbegin()->first + 1);
    const double t = mu.tail_coeff().to_double();
    double below = 0.0;
    if (t != 0.0) {
        lo -= kTailDepth;
        below = std::ldexp(t, static_cast<int>(lo));
    }
    std::vector<double> mass(static_cast<std::size_t>(hi - lo), 0.0);
    for (std::int64_t d = lo; d < mu.tail_threshold(); ++d)
        mass[static_cast<std::size_t>(d - lo)] = std::ldexp(t, static_cast<int>(d));
    for (const auto& [d, v] : mu.finite_part()) mass[static_cast<std::size_t>(d - lo)] = v.to_double();
    return ks_from_points(lo, mass, below, scale);
}

namespace {

double ks_float(const FloatMeasure& mu, double scale) {
    std::int64_t lo = mu.lo;
    double below = 0.0;
    std::vector<double> mass;
    if (mu.tail_mass != 0.0) {
        lo -= kTailDepth;
        below = std::ldexp(mu.tail_mass, -kTailDepth);
        for (std::int64_t d = lo; d < mu.lo; ++d)
            mass.push_back(std::ldexp(mu.tail_mass, static_cast<int>(d - mu.lo)));
    }
    mass.insert(mass.end(), mu.w.begin(), mu.w.end());
    return ks_from_points(lo, mass, below, scale);
}

struct GridPointResult {
    std::vector<double> m;  // series moments 0..R
    double ks = 0.0;
    double reldiff = 0.0;
};

GridPointResult eval_grid_point(const DigitString& ds, unsigned R, double vnu, std::size_t n, bool exact_ok) {
    GridPointResult res;
    res.m = moments_via_series(ds, R);
    const double scale = std::sqrt(vnu * static_cast<double>(n));
    if (exact_ok) {
        const HybridMeasure mu = measure_of(ds);
        for (unsigned r = 1; r <= R; ++r) {
            const double exact = mu.moment(r).to_double();
            const double denom = std::max({1.0, std::abs(exact), std::abs(res.m[r])});
            res.reldiff = std::max(res.reldiff, std::abs(exact - res.m[r]) / denom);
        }
        res.ks = ks_distance_to_normal(mu, scale);
    } else {
        res.ks = ks_float(float_measure_of(ds), scale);
    }
    return res;
}

}  // namespace

MomentReport run_clt(const ExperimentPlan& plan) {
    if (plan.max_order > 10) throw BudgetError("run_clt: moment order exceeds cap 10");
    for (std::size_t i = 1; i < plan.n_grid.size(); ++i)
        if (plan.n_grid[i] <= plan.n_grid[i - 1]) throw std::invalid_argument("run_clt: n grid must increase");

    const CorrelationTable vt = plan.source.has_analytic()
                                    ? asymptotic_variance(plan.source, plan.truncation)
                                    : asymptotic_variance_empirical(plan.source, plan.truncation, 1000000);
    if (vt.degenerate) throw std::invalid_argument("run_clt: degenerate source (V_nu <= 0)");

    MomentReport report;
    report.source = plan.source.describe();
    report.seed = plan.source.seed;
    report.vnu = vt.V;

    BitStream X(plan.source);
    if (!plan.n_grid.empty()) X.ensure(plan.n_grid.back() + 1);

    std::vector<DigitString> digit_strings;
    for (std::size_t n : plan.n_grid) {
        DigitString ds;
        ds.digits.assign(X.prefix().begin(), X.prefix().begin() + static_cast<std::ptrdiff_t>(n + 1));
        digit_strings.push_back(std::move(ds));
    }

    std::vector<GridPointResult> results(plan.n_grid.size());
    auto eval_at = [&](std::size_t i) {
        const std::size_t n = plan.n_grid[i];
        return eval_grid_point(digit_strings[i], plan.max_order, vt.V, n, plan.exact_mode && n <= 4096);
    };
    if (plan.jobs <= 1) {
        for (std::size_t i = 0; i < results.size(); ++i) results[i] = eval_at(i);
    } else {
        std::vector<std::future<GridPointResult>> futs;
        for (std::size_t i = 0; i < results.size(); ++i)
            futs.push_back(std::async(std::launch::async, eval_at, i));
        for (std::size_t i = 0; i < results.size(); ++i) results[i] = futs[i].get();
    }

    for (std::size_t i = 0; i < plan.n_grid.size(); ++i) {
        const std::size_t n = plan.n_grid[i];
        report.max_path_reldiff = std::max(report.max_path_reldiff, results[i].reldiff);
        for (unsigned r = 1; r <= plan.max_order; ++r) {
            MomentRow row;
            row.n = n;
            row.r = r;
            row.m_raw = results[i].m[r];
            row.m_renorm = row.m_raw / std::pow(report.vnu * static_cast<double>(n), static_cast<double>(r) / 2.0);
            row.target = gaussian_moment(r).convert_to<double>();
            row.ks = results[i].ks;
            report.rows.push_back(row);
        }
    }
    return report;
}

double truncation_gap(BitStream& X, std::size_t n, unsigned r, unsigned P) {
    if (r < 1 || r > 3) throw BudgetError("truncation_gap: r must be in [1,3]");
    std::size_t need = n;
    for (unsigned i = 0; i < r; ++i) need += P;
    X.ensure(need + P + 1);
    const auto& bits = X.prefix();
    const std::span<const std::uint8_t> span(bits.data(), bits.size());

    double A;
    if (n <= 512)
        A = extract_AB(span, static_cast<unsigned>(n), r).A.to_double();
    else
        A = extract_AB_approx(span, static_cast<unsigned>(n), r).first;

    double s_total = 0.0;
    std::vector<unsigned> p(r, 1);
    while (true) {
        unsigned psum = 0;
        for (unsigned v : p) psum += v;
        const BigInt s = s_n_sum(X, n, p);
        s_total += std::ldexp(s.convert_to<double>(), -static_cast<int>(psum));
        // odometer over {1..P}^r
        unsigned i = 0;
        while (i < r && p[i] == P) p[i++] = 1;
        if (i == r) break;
        ++p[i];
    }
    return std::abs(A - s_total);
}

CusickScan cusick_scan(unsigned nbits) {
    if (nbits > 20) throw BudgetError("cusick_scan: limit exceeds 2^20");
    const Dyadic half(BigInt(1), 1);
    CusickScan scan;
    scan.limit = BigInt(1) << nbits;
    bool have_min = false;
    for_each_measure(nbits, [&](const std::vector<std::uint8_t>& digits, const HybridMeasure& mu) {
        std::uint64_t a = 0;
        for (std::size_t i = digits.size(); i-- > 0;) a = (a << 1) | digits[i];
        if (a == 0) return;
        const Dyadic c = mu.cusick();
        if (!have_min || c < scan.min_c) {
            have_min = true;
            scan.min_c = c;
            scan.argmin = a;
        }
        if (c <= half) {
            scan.conjecture_holds = false;
            scan.violations.push_back(a);
        }
    });
    const unsigned rev_bits = std::min(nbits, 10u);
    for (std::uint64_t a = 1; a < (std::uint64_t(1) << rev_bits); ++a) {
        const DigitString ds = DigitString::from_integer(a);
        if (cusick_c(ds) != cusick_c(ds.reversed())) scan.reversal_ok = false;
    }
    Dyadic prev;
    for (unsigned k = 1; k <= 12; ++k) {
        std::vector<std::uint8_t> digits(2 * k + 1, 0);
        for (unsigned j = 0; j <= k; ++j) digits[2 * j] = 1;  // a_k = sum 4^j
        const Dyadic c = cusick_c(DigitString(std::move(digits)));
        // Non-strict: the first two scan points tie exactly (c = 5/8).
        if (k > 1 && !(c <= prev && c > half)) scan.trajectory_monotone = false;
        scan.trajectory.push_back(c);
        prev = c;
    }
    return scan;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string clt_report_csv(const MomentReport& report, const std::string& config_echo) {
    std::ostringstream os;
    os << "# " << kVersion << "\n";
    os << "# config: " << config_echo << "\n";
    os << "# source: " << report.source << " seed=" << report.seed << "\n";
    os << "n,r,m_raw,m_renorm,target,ks,vnu,seed\n";
    for (const MomentRow& row : report.rows) {
        os << row.n << ',' << row.r << ',' << fmt17(row.m_raw) << ',' << fmt17(row.m_renorm) << ','
           << fmt17(row.target) << ',' << fmt17(row.ks) << ',' << fmt17(report.vnu) << ',' << report.seed
           << "\n";
    }
    return os.str();
}

std::string clt_report_json(const MomentReport& report, const std::string& config_echo) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config_echo;
    j["source"] = report.source;
    j["seed"] = report.seed;
    j["vnu"] = report.vnu;
    j["max_path_reldiff"] = report.max_path_reldiff;
    j["rows"] = nlohmann::json::array();
    for (const MomentRow& row : report.rows) {
        j["rows"].push_back({{"n", row.n},
                             {"r", row.r},
                             {"m_raw", row.m_raw},
                             {"m_renorm", row.m_renorm},
                             {"target", row.target},
                             {"ks", row.ks}});
    }
    return j.dump(2) + "\n";
}

}  // namespace digitcorr
