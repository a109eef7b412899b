#include "expamoeba/lattice.hpp"

#include <algorithm>
#include <utility>

#include "expamoeba/errors.hpp"

namespace expamoeba {

IntMatrix hermite_normal_form(IntMatrix rows) {
    if (rows.empty()) return rows;
    const std::size_t cols = rows.front().size();
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
        // Euclid on column c among rows pivot_row.. until one nonzero remains.
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = pivot_row; r < rows.size(); ++r)
                if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
            if (best == rows.size()) break;
            std::swap(rows[pivot_row], rows[best]);
            bool done = true;
            for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
                for (std::size_t k = c; k < cols; ++k) rows[r][k] -= q * rows[pivot_row][k];
                if (rows[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[pivot_row][c] == 0) continue;
        if (rows[pivot_row][c] < 0)
            for (auto& e : rows[pivot_row]) e = -e;
        for (std::size_t r = 0; r < pivot_row; ++r) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
            if (q != 0)
                for (std::size_t k = c; k < cols; ++k) rows[r][k] -= q * rows[pivot_row][k];
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
    return rows;
}

std::optional<std::vector<Rational>> solve_in_span(const std::vector<FreqVector>& basis, const FreqVector& v) {
    const std::size_t r = basis.size();
    const std::size_t n = v.size();
    // Columns are basis vectors; augmented with v. Row-reduce the n x (r+1) system.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(r + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (basis[j].size() != n) throw InputError("lattice basis length differs from vector length");
            a[i][j] = basis[j][i];
        }
        a[i][r] = v[i];
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < r && row < n; ++c) {
        std::size_t p = row;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[row], a[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rational f = a[i][c] / a[row][c];
            for (std::size_t k = c; k <= r; ++k) a[i][k] -= f * a[row][k];
        }
        pivot_cols.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (a[i][r] != 0) return std::nullopt;
    std::vector<Rational> coords(r, Rational(0));
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) coords[pivot_cols[i]] = a[i][r] / a[i][pivot_cols[i]];
    return coords;
}

std::size_t rational_rank(const std::vector<FreqVector>& vectors) {
    if (vectors.empty()) return 0;
    std::vector<FreqVector> a = vectors;
    const std::size_t n = a.front().size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[row], a[p]);
        for (std::size_t i = row + 1; i < a.size(); ++i) {
            if (a[i][c] == 0) continue;
            Rational f = a[i][c] / a[row][c];
            for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[row][k];
        }
        ++row;
    }
    return row;
}

std::optional<std::vector<Rational>> FreqLattice::coordinates(const FreqVector& v) const {
    if (v.size() != dim) throw InputError("frequency length differs from lattice dimension");
    return solve_in_span(basis, v);
}

namespace {

Integer common_denominator(const std::vector<FreqVector>& vs) {
    Integer l = 1;
    for (const auto& v : vs)
        for (const auto& c : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    return l;
}

}  // namespace

FreqLattice lattice_basis(const std::vector<FreqVector>& generators, std::size_t dim) {
    FreqLattice lat{dim, {}};
    if (generators.empty()) return lat;
    const Integer d = common_denominator(generators);
    IntMatrix rows;
    for (const auto& g : generators) {
        if (g.size() != dim) throw InputError("generator length differs from lattice dimension");
        std::vector<Integer> row(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            Rational scaled = g[k] * d;
            row[k] = scaled.get_num();
        }
        rows.push_back(std::move(row));
    }
    for (const auto& row : hermite_normal_form(std::move(rows))) {
        FreqVector b(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            b[k] = Rational(row[k], d);
            b[k].canonicalize();
        }
        lat.basis.push_back(std::move(b));
    }
    return lat;
}

FreqLattice lattice_of(const ExpMapping& f) {
    std::vector<FreqVector> gens;
    for (const auto& c : f.components())
        for (const auto& t : c.terms()) gens.push_back(t.freq);
    return lattice_basis(gens, f.dim());
}

IntegerClearing clear_to_integer(const ExpMapping& f) {
    std::vector<FreqVector> all;
    for (const auto& c : f.components())
        for (const auto& t : c.terms()) all.push_back(t.freq);
    const Integer d = common_denominator(all);
    std::vector<ExpSum> comps;
    for (const auto& c : f.components()) {
        std::vector<Term> terms;
        for (const auto& t : c.terms()) {
            FreqVector scaled = t.freq;
            for (auto& q : scaled) q *= d;
            terms.push_back(Term{t.coeff, std::move(scaled)});
        }
        comps.emplace_back(f.dim(), std::move(terms));
    }
    IntMatrix m(f.dim(), std::vector<Integer>(f.dim(), 0));
    for (std::size_t k = 0; k < f.dim(); ++k) m[k][k] = 1;
    return IntegerClearing{ExpMapping(f.dim(), std::move(comps)), std::move(m), d};
}

}  // namespace expamoeba
