#pragma once

// Characters of a frequency lattice, represented by real phase lifts:
// chi(q * omega_j) = exp(i q t_j) for rational q. Phases are kept unreduced
// so that chi stays consistent on subdivided frequencies omega_j / j!.

#include <cstdint>
#include <vector>

#include "expamoeba/lattice.hpp"

namespace expamoeba {

struct Character {
    FreqLattice lattice;
    std::vector<double> phases;  // one per basis vector

    Character(FreqLattice lat, std::vector<double> ph);

    static Character identity(FreqLattice lat);
};

/// chi(lambda); throws DomainError when lambda is outside the rational span.
Complex char_value(const Character& chi, const FreqVector& lambda);

/// F_chi: every coefficient a(lambda) multiplied by chi(lambda).
ExpMapping perturb(const ExpMapping& f, const Character& chi);
ExpSum perturb(const ExpSum& f, const Character& chi);

/// The character lambda -> exp(i <t, lambda>); perturbing by it is the
/// real translation z -> z + t.
Character translation_character(const RVector& t, const FreqLattice& lat);

/// Phases i.i.d. uniform on [0, 2 pi) from a seeded generator.
Character random_character(const FreqLattice& lat, std::uint64_t seed);

/// Componentwise sum of phases (the group product chi * chi').
Character compose(const Character& a, const Character& b);

}  // namespace expamoeba
