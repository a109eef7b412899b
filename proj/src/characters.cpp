#include "expamoeba/characters.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "expamoeba/errors.hpp"

namespace expamoeba {

Character::Character(FreqLattice lat, std::vector<double> ph) : lattice(std::move(lat)), phases(std::move(ph)) {
    if (phases.size() != lattice.rank())
        throw InputError("character needs " + std::to_string(lattice.rank()) + " phases, got " +
                         std::to_string(phases.size()));
    for (double t : phases)
        if (!std::isfinite(t)) throw InputError("character phases must be finite");
}

Character Character::identity(FreqLattice lat) {
    const std::size_t r = lat.rank();
    return Character(std::move(lat), std::vector<double>(r, 0.0));
}

Complex char_value(const Character& chi, const FreqVector& lambda) {
    auto coords = chi.lattice.coordinates(lambda);
    if (!coords) throw DomainError("frequency " + to_string(lambda) + " is outside the span of the character lattice");
    double theta = 0.0;
    for (std::size_t j = 0; j < coords->size(); ++j) {
        const Rational& c = (*coords)[j];
        if (c == 0) continue;
        theta += c == 1 ? chi.phases[j] : c.get_d() * chi.phases[j];
    }
    return unit_phase(theta);
}

ExpSum perturb(const ExpSum& f, const Character& chi) {
    std::vector<Term> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back(Term{t.coeff * char_value(chi, t.freq), t.freq});
    return ExpSum(f.dim(), std::move(terms));
}

ExpMapping perturb(const ExpMapping& f, const Character& chi) {
    std::vector<ExpSum> comps;
    comps.reserve(f.size());
    for (const auto& c : f.components()) comps.push_back(perturb(c, chi));
    return ExpMapping(f.dim(), std::move(comps));
}

Character translation_character(const RVector& t, const FreqLattice& lat) {
    if (t.size() != lat.dim) throw InputError("translation length differs from lattice dimension");
    std::vector<double> phases;
    for (const auto& w : lat.basis) {
        double s = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) s += t[k] * w[k].get_d();
        phases.push_back(s);
    }
    return Character(lat, std::move(phases));
}

Character random_character(const FreqLattice& lat, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> phases;
    for (std::size_t j = 0; j < lat.rank(); ++j) {
        // 53 random bits -> [0, 1); avoids implementation-defined distributions.
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        phases.push_back(2.0 * std::numbers::pi * u);
    }
    return Character(lat, std::move(phases));
}

Character compose(const Character& a, const Character& b) {
    if (!(a.lattice == b.lattice)) throw InputError("composing characters of different lattices");
    std::vector<double> phases(a.phases.size());
    for (std::size_t j = 0; j < phases.size(); ++j) phases[j] = a.phases[j] + b.phases[j];
    return Character(a.lattice, std::move(phases));
}

}  // namespace expamoeba
