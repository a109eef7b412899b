#pragma once

// Exponential sums f(z) = sum_k a_k exp(i <z, lambda_k>) with exact rational
// frequencies and double-precision complex coefficients.

#include <complex>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace expamoeba {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;
using FreqVector = std::vector<Rational>;
using RVector = std::vector<double>;
using CVector = std::vector<Complex>;

/// p/q in lowest terms.
Rational rat(long p, long q = 1);

/// Parses "p/q" or "p" (optional leading '-'); throws InputError otherwise.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& q);

std::string to_string(const FreqVector& v);

FreqVector zero_freq(std::size_t dim);

RVector to_doubles(const FreqVector& v);

struct Term {
    Complex coeff;
    FreqVector freq;
};

/// A finite exponential sum in `dim` complex variables.
///
/// Terms are kept sorted lexicographically by frequency; duplicate
/// frequencies are merged and zero coefficients dropped on construction, so
/// an ExpSum with no terms is the zero function.
class ExpSum {
public:
    ExpSum() = default;
    ExpSum(std::size_t dim, std::vector<Term> terms);

    static ExpSum constant(std::size_t dim, Complex c);

    std::size_t dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Frequencies as doubles, row-major (terms() x dim()).
    const RVector& freq_doubles() const { return freq_d_; }

    Complex operator()(const CVector& z) const;

    friend bool operator==(const ExpSum& a, const ExpSum& b);

private:
    std::size_t dim_ = 0;
    std::vector<Term> terms_;
    RVector freq_d_;
};

ExpSum operator+(const ExpSum& a, const ExpSum& b);

/// F = (f_1, ..., f_m), all components in the same dimension.
class ExpMapping {
public:
    ExpMapping() = default;
    ExpMapping(std::size_t dim, std::vector<ExpSum> components);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return components_.size(); }
    const std::vector<ExpSum>& components() const { return components_; }
    const ExpSum& operator[](std::size_t l) const { return components_[l]; }

    friend bool operator==(const ExpMapping& a, const ExpMapping& b);

private:
    std::size_t dim_ = 0;
    std::vector<ExpSum> components_;
};

CVector evaluate(const ExpMapping& f, const CVector& z);
Complex evaluate(const ExpSum& f, const CVector& z);

std::set<FreqVector> spectrum(const ExpSum& f);

/// a(lambda, f): the stored coefficient, or exactly 0 off the spectrum.
Complex bohr_coefficient(const ExpSum& f, const FreqVector& lambda);

struct BohrMeanOptions {
    // Trapezoid nodes per half of the shortest period of the integrand.
    int nodes_per_half_period = 64;
};

/// Box mean (2s)^-n * integral over |x_k| < s of exp(-i<x+iy,lambda>) f(x+iy)
/// by tensor-product trapezoid. Converges to bohr_coefficient as s grows.
Complex numeric_bohr_mean(const ExpSum& f, const FreqVector& lambda, double s,
                          const RVector& y, const BohrMeanOptions& opts = {});

/// exp(i theta), exact on multiples of pi/2 as they appear in double.
Complex unit_phase(double theta);

}  // namespace expamoeba
