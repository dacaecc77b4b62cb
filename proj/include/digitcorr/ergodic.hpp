#ifndef DIGITCORR_ERGODIC_HPP
#define DIGITCORR_ERGODIC_HPP

#include "digitcorr/dyadic.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace digitcorr {

/// A shift-invariant ergodic source of binary sequences.
struct SourceSpec {
    enum class Kind { bernoulli, markov, periodic, file };

    Kind kind = Kind::bernoulli;
    double p = 0.5;                  // bernoulli
    double p01 = 0.0, p10 = 0.0;     // markov transition off-diagonals
    std::vector<std::uint8_t> word;  // periodic pattern or file contents
    std::uint64_t seed = 0;

    /// Descriptor grammar: "bernoulli:<p>", "markov:<p01>,<p10>",
    /// "periodic:<bits>", "file:<path>". Throws std::invalid_argument on
    /// malformed input.
    static SourceSpec parse(const std::string& descriptor, std::uint64_t seed);

    std::array<double, 2> stationary() const;  // markov only
    bool has_analytic() const { return kind != Kind::file; }
    std::string describe() const;
};

/// Deterministic, seekable bit generator with a materialized prefix.
/// Identical seeds give identical streams.
class BitStream {
public:
    explicit BitStream(SourceSpec spec) : spec_(std::move(spec)) {}

    int bit(std::size_t k);
    void ensure(std::size_t n);
    const std::vector<std::uint8_t>& prefix() const { return prefix_; }
    const SourceSpec& spec() const { return spec_; }

private:
    SourceSpec spec_;
    std::vector<std::uint8_t> prefix_;
    int markov_state_ = -1;
};

/// f_i at offset k: 1 iff X_k != X_{k+i}.
int f_indicator(BitStream& X, std::size_t i, std::size_t k);

/// Closed-form F_i = P(X_0 != X_i). Throws std::invalid_argument for file
/// sources.
double analytic_F(const SourceSpec& source, unsigned i);

struct CorrelationTable {
    std::vector<double> F;  // F[i-1] holds F_i, 1 <= i <= P
    bool empirical = false;
    std::size_t sample_length = 0;
    double V = 0.0;
    double remainder_bound = 0.0;  // 2^{-P}
    bool degenerate = false;       // V <= 0: renormalization impossible
};

/// V = sum_{i<=P} F_i 2^{-i}; empirical mode estimates F_i by the Birkhoff
/// average over a prefix of length n, dividing by n - i. P <= 60.
CorrelationTable asymptotic_variance(const SourceSpec& source, unsigned P);
CorrelationTable asymptotic_variance_empirical(const SourceSpec& source, unsigned P, std::size_t n);

/// Multi-index Birkhoff-type sum
/// S_n(X, p_1..p_r) = sum_{0<=j_1<...<j_r<=n-1}
///   f_{p_1}(sigma^{p_2+...+p_r+j_r} X) f_{p_2}(sigma^{p_3+...+p_r+j_{r-1}} X)
///   ... f_{p_r}(sigma^{j_1} X),
/// by suffix dynamic programming in O(n r). r <= 4.
BigInt s_n_sum(BitStream& X, std::size_t n, const std::vector<unsigned>& p);

struct BirkhoffRow {
    std::size_t n;
    double ratio;   // S_n / n^r
    double target;  // (1/r!) prod_j F_{p_j}
};

/// S_n/n^r against the ergodic limit across a grid of lengths. Requires an
/// analytic F.
std::vector<BirkhoffRow> birkhoff_multi_check(const SourceSpec& source, const std::vector<unsigned>& p,
                                              const std::vector<std::size_t>& n_grid);

}  // namespace digitcorr

#endif
