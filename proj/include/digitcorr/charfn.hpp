#ifndef DIGITCORR_CHARFN_HPP
#define DIGITCORR_CHARFN_HPP

#include "digitcorr/corrmeasure.hpp"
#include "digitcorr/dyadic.hpp"

#include <complex>
#include <span>
#include <vector>

namespace digitcorr {

using Complex = std::complex<double>;

/// 2x2 complex matrix; A(j, theta) builds the phase matrix for digit j.
/// At theta = 0 both reduce to the stochastic matrices I_j.
struct PhaseMatrix {
    Complex m[2][2];
    static PhaseMatrix phase(int digit, double theta);
};

/// Characteristic function of mu_1: e^{i theta} / (2 - e^{-i theta}).
Complex mu1_hat(double theta);

/// Characteristic function of mu_a by the left-to-right row-vector product
/// (1 0) A_{a_0} ... A_{a_n} (1, mu1_hat)^T, a_0 the least significant digit.
Complex charfn_eval(const DigitString& a, double theta);

/// Fourier sum straight from the exact measure, tail in closed form:
/// sum_{d<D} t 2^d e^{i d theta} = t 2^D e^{i(D-1)theta} / (2 - e^{-i theta}).
Complex charfn_exact_sum(const HybridMeasure& mu, double theta);

/// Polynomial in theta truncated at a fixed order: sum c_k theta^k + O(theta^{R+1}).
class TruncatedSeries {
public:
    explicit TruncatedSeries(unsigned order) : c_(order + 1, Complex(0.0)) {}
    static TruncatedSeries constant(Complex v, unsigned order);
    /// Series of exp(i * mult * theta).
    static TruncatedSeries exp_itheta(int mult, unsigned order);

    unsigned order() const { return static_cast<unsigned>(c_.size()) - 1; }
    Complex coeff(unsigned k) const { return c_[k]; }
    Complex& coeff(unsigned k) { return c_[k]; }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    /// Division; b must have an invertible constant term.
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b);

private:
    std::vector<Complex> c_;
};

/// 2x2 matrix of truncated series sharing a common order.
struct SeriesMatrix {
    SeriesMatrix(unsigned order) : e{{TruncatedSeries(order), TruncatedSeries(order)},
                                     {TruncatedSeries(order), TruncatedSeries(order)}} {}
    TruncatedSeries e[2][2];
    /// All-order expansion of the phase matrix for the given digit.
    static SeriesMatrix phase_series(int digit, unsigned order);
};

/// Moments m_0..m_R of mu_a through the series engine: m_r = r! [theta^r] / i^r.
/// Throws std::runtime_error if an imaginary residue above 1e-9 (relative)
/// survives. R <= 16.
std::vector<double> moments_via_series(const DigitString& a, unsigned R);

/// Exact 2x2 dyadic matrix.
struct RatMatrix {
    Dyadic e[2][2];
    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    /// Maximal l1 norm on rows.
    Dyadic norm() const;
    bool operator==(const RatMatrix& o) const = default;
};

/// The constant matrices of the Taylor expansion A_j = I_j + i theta alpha_j
/// - theta^2/2 beta_j + ..., the basis change P, and the conjugates.
namespace constmat {
RatMatrix I(int j);
RatMatrix alpha(int j);
RatMatrix beta(int j);
RatMatrix P();
RatMatrix Pinv();
RatMatrix Itilde(int j);
RatMatrix betatilde(int j);
}  // namespace constmat

struct TypeSum {
    RatMatrix matrix_sum;
    Dyadic norm_sum;
};

/// Sums M_X(u) over all words u in {I,alpha,beta}^n with p alphas and q
/// betas; position k of the word uses the digit X_k. Identity factors past
/// the last alpha/beta act trivially on the evaluation vector (1,1)^T and
/// are omitted from each product. Also returns the sum of norms.
/// Budget: C(n,p+q)*C(p+q,p) <= 1e7 and n <= 16.
TypeSum enumerate_type_sum(std::span<const std::uint8_t> X, unsigned n, unsigned p, unsigned q);

struct ABPair {
    Dyadic A;
    Dyadic B;
};

/// Exact (A_n(X,2r), B_n(X,2r)): the nonzero column of the basis-changed
/// type-(alpha^0, beta^r) sum, via dynamic programming over suffixes. r >= 1,
/// r <= 5.
ABPair extract_AB(std::span<const std::uint8_t> X, unsigned n, unsigned r);

/// Same dynamic program in double precision, for lengths where the exact
/// denominators get too wide.
std::pair<double, double> extract_AB_approx(std::span<const std::uint8_t> X, unsigned n, unsigned r);

}  // namespace digitcorr

#endif
