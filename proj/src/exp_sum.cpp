#include "expamoeba/exp_sum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

#include "expamoeba/errors.hpp"

namespace expamoeba {

Rational rat(long p, long q) {
    if (q == 0) throw InputError("rational with zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    auto bad = [&] {
        return InputError("malformed rational \"" + std::string(text) + "\" (expected \"p\" or \"p/q\")");
    };
    auto digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    std::string_view body = text;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw bad();
    Integer n{std::string(num)}, d{std::string(den)};
    if (d == 0) throw InputError("rational \"" + std::string(text) + "\" has zero denominator");
    if (text.front() == '-') n = -n;
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const FreqVector& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ",";
        s += to_string(v[k]);
    }
    return s + ")";
}

FreqVector zero_freq(std::size_t dim) { return FreqVector(dim, Rational(0)); }

RVector to_doubles(const FreqVector& v) {
    RVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].get_d();
    return out;
}

Complex unit_phase(double theta) {
    constexpr double quarter = std::numbers::pi / 2;
    double k = std::nearbyint(theta / quarter);
    if (std::abs(k) < 1e15 && k * quarter == theta) {
        switch (static_cast<long long>(std::fmod(std::fmod(k, 4.0) + 4.0, 4.0))) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return {std::cos(theta), std::sin(theta)};
}

ExpSum::ExpSum(std::size_t dim, std::vector<Term> terms) : dim_(dim) {
    std::map<FreqVector, Complex> merged;
    for (auto& t : terms) {
        if (t.freq.size() != dim)
            throw InputError("term frequency " + to_string(t.freq) + " has length " +
                             std::to_string(t.freq.size()) + ", expected " + std::to_string(dim));
        merged[t.freq] += t.coeff;
    }
    for (auto& [freq, coeff] : merged) {
        if (coeff == Complex(0.0, 0.0)) continue;
        terms_.push_back(Term{coeff, freq});
        for (const auto& c : freq) freq_d_.push_back(c.get_d());
    }
}

ExpSum ExpSum::constant(std::size_t dim, Complex c) { return ExpSum(dim, {Term{c, zero_freq(dim)}}); }

Complex ExpSum::operator()(const CVector& z) const {
    if (z.size() != dim_)
        throw InputError("evaluation point has length " + std::to_string(z.size()) + ", expected " +
                         std::to_string(dim_));
    Complex sum = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        Complex phase = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) phase += z[k] * freq_d_[t * dim_ + k];
        // exp(i*phase) = exp(-Im phase) * (cos Re + i sin Re)
        sum += terms_[t].coeff * std::exp(-phase.imag()) * unit_phase(phase.real());
    }
    return sum;
}

bool operator==(const ExpSum& a, const ExpSum& b) {
    if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t t = 0; t < a.terms_.size(); ++t)
        if (a.terms_[t].coeff != b.terms_[t].coeff || a.terms_[t].freq != b.terms_[t].freq) return false;
    return true;
}

ExpSum operator+(const ExpSum& a, const ExpSum& b) {
    if (a.dim() != b.dim()) throw InputError("adding exponential sums of different dimension");
    std::vector<Term> terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return ExpSum(a.dim(), std::move(terms));
}

ExpMapping::ExpMapping(std::size_t dim, std::vector<ExpSum> components)
    : dim_(dim), components_(std::move(components)) {
    if (dim_ == 0) throw InputError("mapping dimension must be positive");
    if (components_.empty()) throw InputError("mapping needs at least one component");
    for (const auto& c : components_)
        if (c.dim() != dim_) throw InputError("component dimension differs from mapping dimension");
}

bool operator==(const ExpMapping& a, const ExpMapping& b) {
    return a.dim_ == b.dim_ && a.components_ == b.components_;
}

Complex evaluate(const ExpSum& f, const CVector& z) { return f(z); }

CVector evaluate(const ExpMapping& f, const CVector& z) {
    if (z.size() != f.dim())
        throw InputError("evaluation point has length " + std::to_string(z.size()) + ", expected " +
                         std::to_string(f.dim()));
    CVector out;
    out.reserve(f.size());
    for (const auto& c : f.components()) out.push_back(c(z));
    return out;
}

std::set<FreqVector> spectrum(const ExpSum& f) {
    std::set<FreqVector> sp;
    for (const auto& t : f.terms()) sp.insert(t.freq);
    return sp;
}

Complex bohr_coefficient(const ExpSum& f, const FreqVector& lambda) {
    if (lambda.size() != f.dim()) throw InputError("frequency length differs from dimension");
    auto it = std::lower_bound(f.terms().begin(), f.terms().end(), lambda,
                               [](const Term& t, const FreqVector& l) { return t.freq < l; });
    if (it != f.terms().end() && it->freq == lambda) return it->coeff;
    return 0.0;
}

namespace {

// Trapezoid mean of exp(i*mu*x) over [-s, s] with `nodes` subintervals.
Complex trapezoid_mean_1d(double mu, double s, long nodes) {
    if (mu == 0.0) return 1.0;
    const double h = 2.0 * s / static_cast<double>(nodes);
    Complex sum = 0.5 * (std::exp(Complex(0.0, -mu * s)) + std::exp(Complex(0.0, mu * s)));
    for (long k = 1; k < nodes; ++k) sum += std::exp(Complex(0.0, mu * (-s + h * static_cast<double>(k))));
    return sum * h / (2.0 * s);
}

}  // namespace

Complex numeric_bohr_mean(const ExpSum& f, const FreqVector& lambda, double s, const RVector& y,
                          const BohrMeanOptions& opts) {
    const std::size_t n = f.dim();
    if (lambda.size() != n || y.size() != n) throw InputError("bohr mean: dimension mismatch");
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("bohr mean: s must be positive and finite");

    // The integrand is sum_t a_t exp(-<y, mu_t>) exp(i <x, mu_t>) with
    // mu_t = lambda_t - lambda; the tensor trapezoid of each separable term
    // factorizes into 1-D trapezoid means.
    const RVector lam = to_doubles(lambda);
    const auto& fd = f.freq_doubles();
    double max_mu = 0.0;
    for (std::size_t t = 0; t < f.terms().size(); ++t)
        for (std::size_t k = 0; k < n; ++k) max_mu = std::max(max_mu, std::abs(fd[t * n + k] - lam[k]));
    long nodes = 2L * opts.nodes_per_half_period;
    if (max_mu > 0.0) {
        const double half_period = std::numbers::pi / max_mu;
        const double h = half_period / opts.nodes_per_half_period;
        nodes = std::max(nodes, static_cast<long>(std::ceil(2.0 * s / h)));
    }

    Complex total = 0.0;
    for (std::size_t t = 0; t < f.terms().size(); ++t) {
        double decay = 0.0;
        Complex factor = f.terms()[t].coeff;
        for (std::size_t k = 0; k < n; ++k) {
            const double mu = fd[t * n + k] - lam[k];
            decay += y[k] * mu;
            factor *= trapezoid_mean_1d(mu, s, nodes);
        }
        total += factor * std::exp(-decay);
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw NumericError("bohr mean: non-finite quadrature result");
    return total;
}

}  // namespace expamoeba
