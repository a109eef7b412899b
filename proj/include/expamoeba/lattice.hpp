#pragma once

// The Z-module generated by the spectra of a mapping, and the integer
// normalization of rational spectra.

#include <optional>
#include <vector>

#include "expamoeba/exp_sum.hpp"

namespace expamoeba {

using IntMatrix = std::vector<std::vector<Integer>>;

/// Row-style Hermite normal form: nonzero rows only, pivots positive and
/// strictly increasing in column, entries above each pivot reduced into
/// [0, pivot).
IntMatrix hermite_normal_form(IntMatrix rows);

/// Exact rational solve of v = sum_j c_j * basis_j. nullopt when v is not
/// in the rational span. Basis rows must be linearly independent.
std::optional<std::vector<Rational>> solve_in_span(const std::vector<FreqVector>& basis, const FreqVector& v);

/// Rank of a set of rational vectors.
std::size_t rational_rank(const std::vector<FreqVector>& vectors);

struct FreqLattice {
    std::size_t dim = 0;
    std::vector<FreqVector> basis;

    std::size_t rank() const { return basis.size(); }

    /// Rational coordinates of v over the basis; nullopt outside the span.
    std::optional<std::vector<Rational>> coordinates(const FreqVector& v) const;

    friend bool operator==(const FreqLattice&, const FreqLattice&) = default;
};

/// Canonical Z-basis of the lattice generated by `generators` (clear
/// denominators, HNF, rescale). Empty input gives the rank-0 lattice.
FreqLattice lattice_basis(const std::vector<FreqVector>& generators, std::size_t dim);

/// The lattice generated by the union of all component spectra.
FreqLattice lattice_of(const ExpMapping& f);

struct IntegerClearing {
    ExpMapping mapping;  // F'(w) = F(d * M^-T w); F(z) = F'(M^T z / d)
    IntMatrix matrix;    // M
    Integer scale;       // d
};

/// Rewrites F with integer frequencies: F'(w) = F(d w), d the common
/// denominator of every frequency, M the identity. Zeros correspond under
/// w = z / d, and F' is 2*pi periodic in every real direction.
IntegerClearing clear_to_integer(const ExpMapping& f);

}  // namespace expamoeba
