#include "digitcorr/ergodic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace digitcorr {

namespace {

// Counter-based generator: seekable, identical across platforms.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t k) {
    return static_cast<double>(mix64(seed, k) >> 11) * 0x1.0p-53;
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& descriptor, std::uint64_t seed) {
    SourceSpec s;
    s.seed = seed;
    const auto colon = descriptor.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("source descriptor needs '<kind>:<params>'");
    const std::string kind = descriptor.substr(0, colon);
    const std::string rest = descriptor.substr(colon + 1);
    auto parse_prob = [](const std::string& t) {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size() || v < 0.0 || v > 1.0) throw std::invalid_argument("probability out of [0,1]: " + t);
        return v;
    };
    if (kind == "bernoulli") {
        s.kind = Kind::bernoulli;
        s.p = parse_prob(rest);
    } else if (kind == "markov") {
        s.kind = Kind::markov;
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("markov descriptor needs '<p01>,<p10>'");
        s.p01 = parse_prob(rest.substr(0, comma));
        s.p10 = parse_prob(rest.substr(comma + 1));
    } else if (kind == "periodic") {
        s.kind = Kind::periodic;
        for (char c : rest) {
            if (c != '0' && c != '1') throw std::invalid_argument("periodic word must be over {0,1}");
            s.word.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        if (s.word.empty()) throw std::invalid_argument("periodic word must be nonempty");
    } else if (kind == "file") {
        s.kind = Kind::file;
        std::ifstream in(rest);
        if (!in) throw std::invalid_argument("cannot open bit file: " + rest);
        char c;
        while (in.get(c)) {
            if (c == '0' || c == '1')
                s.word.push_back(static_cast<std::uint8_t>(c - '0'));
            else if (!std::isspace(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bit file must contain only '0'/'1' and whitespace");
        }
        if (s.word.empty()) throw std::invalid_argument("bit file holds no bits");
    } else {
        throw std::invalid_argument("unknown source kind: " + kind);
    }
    return s;
}

std::array<double, 2> SourceSpec::stationary() const {
    const double s = p01 + p10;
    if (s == 0.0) return {0.5, 0.5};
    return {p10 / s, p01 / s};
}

std::string SourceSpec::describe() const {
    char buf[128];
    switch (kind) {
        case Kind::bernoulli:
            std::snprintf(buf, sizeof buf, "bernoulli:%.17g", p);
            return buf;
        case Kind::markov:
            std::snprintf(buf, sizeof buf, "markov:%.17g,%.17g", p01, p10);
            return buf;
        case Kind::periodic: {
            std::string s = "periodic:";
            for (auto b : word) s += static_cast<char>('0' + b);
            return s;
        }
        case Kind::file:
            return "file:<" + std::to_string(word.size()) + " bits>";
    }
    return "?";
}

void BitStream::ensure(std::size_t n) {
    if (prefix_.size() >= n) return;
    prefix_.reserve(n);
    switch (spec_.kind) {
        case SourceSpec::Kind::bernoulli:
            for (std::size_t k = prefix_.size(); k < n; ++k)
                prefix_.push_back(uniform01(spec_.seed, k) < spec_.p ? 1 : 0);
            break;
        case SourceSpec::Kind::markov:
            for (std::size_t k = prefix_.size(); k < n; ++k) {
                const double u = uniform01(spec_.seed, k);
                int next;
                if (markov_state_ < 0) {
                    next = u < spec_.stationary()[1] ? 1 : 0;
                } else if (markov_state_ == 0) {
                    next = u < spec_.p01 ? 1 : 0;
                } else {
                    next = u < spec_.p10 ? 0 : 1;
                }
                markov_state_ = next;
                prefix_.push_back(static_cast<std::uint8_t>(next));
            }
            break;
        case SourceSpec::Kind::periodic:
            for (std::size_t k = prefix_.size(); k < n; ++k)
                prefix_.push_back(spec_.word[k % spec_.word.size()]);
            break;
        case SourceSpec::Kind::file:
            if (n > spec_.word.size()) throw std::out_of_range("bit file shorter than requested prefix");
            for (std::size_t k = prefix_.size(); k < n; ++k) prefix_.push_back(spec_.word[k]);
            break;
    }
}

int BitStream::bit(std::size_t k) {
    ensure(k + 1);
    return prefix_[k];
}

int f_indicator(BitStream& X, std::size_t i, std::size_t k) {
    return X.bit(k) != X.bit(k + i) ? 1 : 0;
}

double analytic_F(const SourceSpec& source, unsigned i) {
    switch (source.kind) {
        case SourceSpec::Kind::bernoulli:
            return 2.0 * source.p * (1.0 - source.p);
        case SourceSpec::Kind::markov: {
            // pi_0 (P^i)_{01} + pi_1 (P^i)_{10}
            double m[2][2] = {{1.0 - source.p01, source.p01}, {source.p10, 1.0 - source.p10}};
            double acc[2][2] = {{1, 0}, {0, 1}};
            for (unsigned k = 0; k < i; ++k) {
                double nx[2][2];
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        nx[a][b] = acc[a][0] * m[0][b] + acc[a][1] * m[1][b];
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) acc[a][b] = nx[a][b];
            }
            const auto pi = source.stationary();
            return pi[0] * acc[0][1] + pi[1] * acc[1][0];
        }
        case SourceSpec::Kind::periodic: {
            const std::size_t L = source.word.size();
            unsigned cnt = 0;
            for (std::size_t k = 0; k < L; ++k)
                cnt += source.word[k] != source.word[(k + i) % L] ? 1u : 0u;
            return static_cast<double>(cnt) / static_cast<double>(L);
        }
        case SourceSpec::Kind::file:
            throw std::invalid_argument("analytic_F: file sources have no closed form");
    }
    return 0.0;
}

namespace {

CorrelationTable assemble(std::vector<double> F, unsigned P) {
    CorrelationTable t;
    t.F = std::move(F);
    double v = 0.0;
    for (unsigned i = P; i >= 1; --i) v += t.F[i - 1] * std::ldexp(1.0, -static_cast<int>(i));
    t.V = v;
    t.remainder_bound = std::ldexp(1.0, -static_cast<int>(P));
    t.degenerate = v <= 0.0;
    return t;
}

}  // namespace

CorrelationTable asymptotic_variance(const SourceSpec& source, unsigned P) {
    if (P > 60) throw BudgetError("asymptotic_variance: truncation exceeds cap 60");
    std::vector<double> F(P);
    for (unsigned i = 1; i <= P; ++i) F[i - 1] = analytic_F(source, i);
    return assemble(std::move(F), P);
}

CorrelationTable asymptotic_variance_empirical(const SourceSpec& source, unsigned P, std::size_t n) {
    if (P > 60) throw BudgetError("asymptotic_variance: truncation exceeds cap 60");
    BitStream X(source);
    X.ensure(n);
    const auto& bits = X.prefix();
    std::vector<double> F(P);
    for (unsigned i = 1; i <= P && i < n; ++i) {
        std::size_t cnt = 0;
        for (std::size_t k = 0; k + i < n; ++k) cnt += bits[k] != bits[k + i] ? 1 : 0;
        F[i - 1] = static_cast<double>(cnt) / static_cast<double>(n - i);  // unbiased under stationarity
    }
    auto t = assemble(std::move(F), P);
    t.empirical = true;
    t.sample_length = n;
    return t;
}

BigInt s_n_sum(BitStream& X, std::size_t n, const std::vector<unsigned>& p) {
    const std::size_t r = p.size();
    if (r == 0 || r > 4) throw BudgetError("s_n_sum: tuple length must be in [1,4]");
    std::size_t psum = 0;
    for (unsigned v : p) psum += v;
    X.ensure(n + psum);
    const auto& bits = X.prefix();

    // offsets: factor i (1-based) is evaluated at shift p_{i+1}+...+p_r + j.
    std::vector<std::size_t> offset(r);
    {
        std::size_t acc = 0;
        for (std::size_t i = r; i-- > 0;) {
            offset[i] = acc;
            acc += p[i];
        }
    }
    auto factor = [&](std::size_t i, std::size_t j) {  // c_i(j), i 0-based
        const std::size_t k = offset[i] + j;
        return bits[k] != bits[k + p[i]] ? 1 : 0;
    };

    // Chains built from the smallest index: the factor with the largest
    // tuple position pairs with the smallest j.
    std::vector<BigInt> E(n);
    for (std::size_t j = 0; j < n; ++j) E[j] = factor(r - 1, j);
    for (std::size_t m = 2; m <= r; ++m) {
        BigInt pref = 0;
        std::vector<BigInt> nx(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (factor(r - m, j)) nx[j] = pref;
            pref += E[j];
        }
        E = std::move(nx);
    }
    BigInt total = 0;
    for (const auto& v : E) total += v;
    return total;
}

std::vector<BirkhoffRow> birkhoff_multi_check(const SourceSpec& source, const std::vector<unsigned>& p,
                                              const std::vector<std::size_t>& n_grid) {
    double target = 1.0;
    for (std::size_t i = 1; i <= p.size(); ++i) target /= static_cast<double>(i);
    for (unsigned v : p) target *= analytic_F(source, v);
    BitStream X(source);
    std::vector<BirkhoffRow> rows;
    for (std::size_t n : n_grid) {
        const BigInt s = s_n_sum(X, n, p);
        const double ratio = s.convert_to<double>() / std::pow(static_cast<double>(n), static_cast<double>(p.size()));
        rows.push_back({n, ratio, target});
    }
    return rows;
}

}  // namespace digitcorr
