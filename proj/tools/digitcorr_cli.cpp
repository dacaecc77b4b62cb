#include "digitcorr/charfn.hpp"
#include "digitcorr/cltlab.hpp"
#include "digitcorr/corrmeasure.hpp"
#include "digitcorr/ergodic.hpp"
#include "digitcorr/oracle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace digitcorr;

std::string join_argv(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    out << content;
}

std::vector<std::size_t> parse_grid(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return {static_cast<std::size_t>(std::stoull(s))};
    const auto lo = std::stoull(s.substr(0, dots));
    const auto hi = std::stoull(s.substr(dots + 2));
    if (lo == 0 || hi < lo) throw std::invalid_argument("bad grid range: " + s);
    return ExperimentPlan::doubling_grid(lo, hi);
}

std::vector<unsigned> parse_tuple(const std::string& s) {
    std::vector<unsigned> p;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) p.push_back(static_cast<unsigned>(std::stoul(item)));
    if (p.empty()) throw std::invalid_argument("empty tuple");
    return p;
}

int run(int argc, char** argv) {
    CLI::App app{"Exact binary digit-correlation measures, their moments, and CLT experiments"};
    app.require_subcommand(1);
    const std::string echo = join_argv(argc, argv);

    std::uint64_t a_value = 1;
    std::uint64_t seed = 0;
    std::string source_desc = "bernoulli:0.5";
    std::string out_dir = ".";
    unsigned jobs = 1;

    auto* measure = app.add_subcommand("measure", "Exact measure mu_a");
    measure->add_option("--a", a_value, "index a")->required();
    bool do_dump = false;
    measure->add_flag("--dump", do_dump, "print the support dump");
    measure->add_option("--out", out_dir, "output directory");

    auto* moments = app.add_subcommand("moments", "Moments of mu_a via the series engine");
    unsigned order = 6;
    moments->add_option("--a", a_value, "index a")->required();
    moments->add_option("--order", order, "max moment order");

    auto* variance = app.add_subcommand("variance", "Exact closed-form variance of mu_a");
    variance->add_option("--a", a_value, "index a")->required();

    auto* cusick = app.add_subcommand("cusick", "Scan the Cusick quantities c_a");
    unsigned cusick_bits = 16;
    cusick->add_option("--bits", cusick_bits, "scan a < 2^bits");
    cusick->add_option("--out", out_dir, "output directory");

    auto* density = app.add_subcommand("density", "Brute-force density of s_2(n+a)-s_2(n)");
    std::uint64_t big_n = 1ull << 22;
    std::int64_t d_lo = -40, d_hi = 64;
    density->add_option("--a", a_value, "index a")->required();
    density->add_option("--N", big_n, "number of scanned n");
    density->add_option("--dlo", d_lo, "window lower bound");
    density->add_option("--dhi", d_hi, "window upper bound");
    density->add_option("--jobs", jobs, "worker count");
    density->add_option("--out", out_dir, "output directory");

    auto* vnu = app.add_subcommand("vnu", "Asymptotic variance V_nu of a source");
    std::string mode = "analytic";
    unsigned trunc = 40;
    std::size_t emp_n = 1000000;
    vnu->add_option("--source", source_desc, "source descriptor");
    vnu->add_option("--seed", seed, "stream seed");
    vnu->add_option("--mode", mode, "analytic | empirical")->check(CLI::IsMember({"analytic", "empirical"}));
    vnu->add_option("--P", trunc, "truncation depth");
    vnu->add_option("--n", emp_n, "empirical sample length");

    auto* clt = app.add_subcommand("clt", "Renormalized-moment CLT experiment");
    std::string grid_desc = "64..16384";
    unsigned clt_order = 6;
    bool no_exact = false;
    clt->add_option("--source", source_desc, "source descriptor");
    clt->add_option("--seed", seed, "stream seed");
    clt->add_option("--ngrid", grid_desc, "doubling grid lo..hi");
    clt->add_option("--order", clt_order, "max moment order");
    clt->add_flag("--no-exact", no_exact, "skip the exact-measure path");
    clt->add_option("--jobs", jobs, "worker count");
    clt->add_option("--out", out_dir, "output directory");

    auto* weights = app.add_subcommand("weights", "Type-(alpha^p, beta^q) matrix sums");
    unsigned wn = 8, wp = 1, wq = 1;
    weights->add_option("--n", wn, "word length");
    weights->add_option("--p", wp, "alpha count");
    weights->add_option("--q", wq, "beta count");
    weights->add_option("--source", source_desc, "source descriptor");
    weights->add_option("--seed", seed, "stream seed");

    auto* sn = app.add_subcommand("sn", "Multi-index Birkhoff sum S_n");
    std::size_t sn_n = 1000;
    std::string tuple_desc = "1";
    sn->add_option("--source", source_desc, "source descriptor");
    sn->add_option("--seed", seed, "stream seed");
    sn->add_option("--n", sn_n, "length n");
    sn->add_option("--p", tuple_desc, "comma-separated tuple p_1,..,p_r");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*measure) {
        const HybridMeasure mu = measure_of(DigitString::from_integer(a_value));
        std::ostringstream os;
        mu.dump(os);
        if (do_dump) std::cout << os.str();
        write_file(out_dir, "measure_" + std::to_string(a_value) + ".txt",
                   "# " + echo + "\n" + os.str());
    } else if (*moments) {
        const auto m = moments_via_series(DigitString::from_integer(a_value), order);
        for (unsigned r = 0; r <= order; ++r) std::cout << r << '\t' << fmt17(m[r]) << '\n';
    } else if (*variance) {
        const Dyadic v = variance_closed_form(DigitString::from_integer(a_value));
        std::cout << v.str() << '\t' << fmt17(v.to_double()) << '\n';
    } else if (*cusick) {
        const CusickScan scan = cusick_scan(cusick_bits);
        std::ostringstream os;
        os << "# " << echo << "\n";
        os << "min_c," << scan.min_c.str() << ',' << fmt17(scan.min_c.to_double()) << "\n";
        os << "argmin," << scan.argmin << "\n";
        os << "conjecture_holds," << (scan.conjecture_holds ? 1 : 0) << "\n";
        os << "reversal_ok," << (scan.reversal_ok ? 1 : 0) << "\n";
        os << "trajectory_monotone," << (scan.trajectory_monotone ? 1 : 0) << "\n";
        for (std::size_t k = 0; k < scan.trajectory.size(); ++k)
            os << "c_traj_" << k + 1 << ',' << fmt17(scan.trajectory[k].to_double()) << "\n";
        std::cout << os.str();
        write_file(out_dir, "cusick.csv", os.str());
        if (!scan.conjecture_holds) {
            std::cout << "FINDING: c_a <= 1/2 at";
            for (const auto& v : scan.violations) std::cout << ' ' << v;
            std::cout << '\n';
        }
    } else if (*density) {
        const DensityScan scan = density_scan(a_value, big_n, d_lo, d_hi, jobs);
        const HybridMeasure mu = measure_of(DigitString::from_integer(a_value));
        std::ostringstream os;
        os << "# " << echo << "\n";
        os << "a,d,N,count,density,exact_density,abs_error\n";
        for (const DensityEstimate& e : scan.in_window) {
            const double exact = mu.at(e.d).to_double();
            os << e.a << ',' << e.d << ',' << e.N << ',' << e.count << ',' << fmt17(e.density) << ','
               << fmt17(exact) << ',' << fmt17(std::abs(e.density - exact)) << "\n";
        }
        os << "# out_of_window=" << scan.out_of_window << " kummer_checks=" << scan.kummer_checks
           << " kummer_mismatches=" << scan.kummer_mismatches << "\n";
        std::cout << os.str();
        write_file(out_dir, "density_" + std::to_string(a_value) + ".csv", os.str());
    } else if (*vnu) {
        const SourceSpec src = SourceSpec::parse(source_desc, seed);
        const CorrelationTable t = mode == "analytic" ? asymptotic_variance(src, trunc)
                                                      : asymptotic_variance_empirical(src, trunc, emp_n);
        std::cout << "V=" << fmt17(t.V) << " remainder_bound=" << fmt17(t.remainder_bound)
                  << (t.degenerate ? " DEGENERATE" : "") << '\n';
        for (std::size_t i = 0; i < t.F.size(); ++i)
            std::cout << "F_" << i + 1 << '=' << fmt17(t.F[i]) << '\n';
    } else if (*clt) {
        ExperimentPlan plan;
        plan.source = SourceSpec::parse(source_desc, seed);
        plan.n_grid = parse_grid(grid_desc);
        plan.max_order = clt_order;
        plan.exact_mode = !no_exact;
        plan.jobs = jobs;
        const MomentReport report = run_clt(plan);
        write_file(out_dir, "clt.csv", clt_report_csv(report, echo));
        write_file(out_dir, "clt.json", clt_report_json(report, echo));
        std::cout << "wrote " << out_dir << "/clt.csv (V_nu=" << fmt17(report.vnu)
                  << ", max_path_reldiff=" << fmt17(report.max_path_reldiff) << ")\n";
    } else if (*weights) {
        BitStream X(SourceSpec::parse(source_desc, seed));
        X.ensure(wn);
        const TypeSum sum = enumerate_type_sum({X.prefix().data(), X.prefix().size()}, wn, wp, wq);
        std::cout << "norm_sum=" << sum.norm_sum.str() << " (" << fmt17(sum.norm_sum.to_double()) << ")\n";
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                std::cout << "sum[" << i << "][" << j << "]=" << sum.matrix_sum.e[i][j].str() << '\n';
    } else if (*sn) {
        BitStream X(SourceSpec::parse(source_desc, seed));
        const auto tuple = parse_tuple(tuple_desc);
        const BigInt s = s_n_sum(X, sn_n, tuple);
        const double ratio =
            s.convert_to<double>() / std::pow(static_cast<double>(sn_n), static_cast<double>(tuple.size()));
        std::cout << "S_n=" << s << " ratio=" << fmt17(ratio) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const digitcorr::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
