#include "expamoeba/bochner_fejer.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "expamoeba/errors.hpp"

namespace expamoeba {

FejerBasis::FejerBasis(FreqLattice lat) : lattice(std::move(lat)), order(lattice.rank()) {}

FejerBasis::FejerBasis(FreqLattice lat, std::size_t ord) : lattice(std::move(lat)), order(ord) {
    if (order > lattice.rank()) throw InputError("Fejer basis order exceeds lattice rank");
}

namespace {

Integer factorial(int j) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(j));
    return f;
}

void check_order(int j, int max_order) {
    if (j < 1) throw InputError("Fejer order j must be positive");
    if (j > max_order)
        throw InputError("Fejer order j = " + std::to_string(j) + " exceeds the cap " + std::to_string(max_order));
}

// Nearest double; mpq's get_d truncates.
double nearest(const Rational& q) { return q.get_num().get_d() / q.get_den().get_d(); }

}  // namespace

Rational multiplier(const FreqVector& lambda, int j, const FejerBasis& basis, int max_order) {
    check_order(j, max_order);
    std::vector<FreqVector> used(basis.lattice.basis.begin(),
                                 basis.lattice.basis.begin() + static_cast<std::ptrdiff_t>(basis.order));
    if (lambda.size() != basis.lattice.dim) throw InputError("frequency length differs from basis dimension");
    auto coords = solve_in_span(used, lambda);
    if (!coords) throw DomainError("frequency " + to_string(lambda) + " is outside the span of the Fejer basis");

    const Integer jf = factorial(j);
    const Integer jf2 = jf * jf;
    Rational mu = 1;
    for (std::size_t r = 0; r < coords->size(); ++r) {
        const Rational nu = (*coords)[r] * jf;
        if (nu == 0) continue;
        if (static_cast<int>(r) >= j) return 0;
        if (nu.get_den() != 1) return 0;
        const Integer a = abs(nu.get_num());
        if (a > jf2) return 0;
        Rational factor(jf2 - a, jf2);
        factor.canonicalize();
        mu *= factor;
    }
    mu.canonicalize();
    return mu;
}

ExpSum fejer_approx(const ExpSum& f, int j, const FejerBasis& basis, int max_order) {
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        const Rational mu = multiplier(t.freq, j, basis, max_order);
        if (mu == 0) continue;
        terms.push_back(Term{t.coeff * nearest(mu), t.freq});
    }
    return ExpSum(f.dim(), std::move(terms));
}

ExpMapping fejer_approx(const ExpMapping& f, int j, const FejerBasis& basis, int max_order) {
    std::vector<ExpSum> comps;
    for (const auto& c : f.components()) comps.push_back(fejer_approx(c, j, basis, max_order));
    return ExpMapping(f.dim(), std::move(comps));
}

void TubeWindow::validate() const {
    const std::size_t n = y_lo.size();
    if (n == 0 || y_hi.size() != n || x_lo.size() != n || x_hi.size() != n || grid_x.size() != n ||
        grid_y.size() != n)
        throw InputError("tube window: inconsistent axis counts");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(x_lo[k] < x_hi[k]) || !(y_lo[k] < y_hi[k])) throw InputError("tube window: need lo < hi on every axis");
        if (grid_x[k] < 2 || grid_y[k] < 2) throw InputError("tube window: grid counts must be >= 2");
    }
}

TubeWindow TubeWindow::box(RVector x_lo, RVector x_hi, RVector y_lo, RVector y_hi, int samples) {
    const std::size_t n = x_lo.size();
    TubeWindow w{std::move(y_lo), std::move(y_hi), std::move(x_lo), std::move(x_hi),
                 std::vector<int>(n, samples), std::vector<int>(n, samples)};
    w.validate();
    return w;
}

namespace {

ExpMapping difference(const ExpMapping& f, const ExpMapping& g) {
    if (f.dim() != g.dim() || f.size() != g.size()) throw InputError("sup distance: mappings differ in shape");
    std::vector<ExpSum> comps;
    for (std::size_t l = 0; l < f.size(); ++l) {
        std::vector<Term> terms = f[l].terms();
        for (const auto& t : g[l].terms()) terms.push_back(Term{-t.coeff, t.freq});
        comps.emplace_back(f.dim(), std::move(terms));
    }
    return ExpMapping(f.dim(), std::move(comps));
}

// Point in R^{2n}: x coordinates then y coordinates.
double max_modulus(const ExpMapping& h, const RVector& p) {
    const std::size_t n = h.dim();
    CVector z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = Complex(p[k], p[n + k]);
    double m = 0.0;
    for (const auto& c : h.components()) m = std::max(m, std::abs(c(z)));
    return m;
}

}  // namespace

double sup_distance(const ExpMapping& f, const ExpMapping& g, const TubeWindow& w, const SupOptions& opts) {
    w.validate();
    const ExpMapping h = difference(f, g);
    const std::size_t n = h.dim();
    if (w.dim() != n) throw InputError("sup distance: window dimension differs from mapping dimension");

    RVector lo(2 * n), hi(2 * n);
    std::vector<int> counts(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        lo[k] = w.x_lo[k], hi[k] = w.x_hi[k], counts[k] = w.grid_x[k];
        lo[n + k] = w.y_lo[k], hi[n + k] = w.y_hi[k], counts[n + k] = w.grid_y[k];
    }

    std::vector<std::pair<double, RVector>> best;  // top samples for refinement
    const std::size_t keep = opts.refine ? static_cast<std::size_t>(std::max(1, opts.refine_starts)) : 0;
    double sup = 0.0;
    std::vector<int> idx(2 * n, 0);
    RVector p(2 * n);
    for (;;) {
        for (std::size_t a = 0; a < 2 * n; ++a)
            p[a] = lo[a] + (hi[a] - lo[a]) * static_cast<double>(idx[a]) / static_cast<double>(counts[a] - 1);
        const double v = max_modulus(h, p);
        sup = std::max(sup, v);
        if (keep) {
            if (best.size() < keep || v > best.back().first) {
                best.emplace_back(v, p);
                std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
                if (best.size() > keep) best.pop_back();
            }
        }
        std::size_t a = 0;
        while (a < 2 * n && ++idx[a] == counts[a]) idx[a++] = 0;
        if (a == 2 * n) break;
    }

    for (auto& [value, q] : best) {
        // Compass ascent; steps start at one grid spacing.
        RVector step(2 * n);
        for (std::size_t a = 0; a < 2 * n; ++a) step[a] = (hi[a] - lo[a]) / static_cast<double>(counts[a] - 1);
        double cur = value;
        for (int iter = 0; iter < 200; ++iter) {
            bool moved = false;
            for (std::size_t a = 0; a < 2 * n; ++a) {
                for (double dir : {1.0, -1.0}) {
                    RVector t = q;
                    t[a] = std::clamp(t[a] + dir * step[a], lo[a], hi[a]);
                    const double v = max_modulus(h, t);
                    if (v > cur) {
                        cur = v, q = t, moved = true;
                        break;
                    }
                }
            }
            if (!moved) {
                double biggest = 0.0;
                for (auto& s : step) biggest = std::max(biggest, s *= 0.5);
                if (biggest < 1e-9) break;
            }
        }
        sup = std::max(sup, cur);
    }
    return sup;
}

}  // namespace expamoeba
