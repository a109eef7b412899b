#pragma once

// Bochner-Fejer approximations Q_j and sup-distance diagnostics over tubes.

#include <vector>

#include "expamoeba/lattice.hpp"

namespace expamoeba {

inline constexpr int kDefaultMaxFejerOrder = 8;

struct FejerBasis {
    FreqLattice lattice;
    std::size_t order;  // number of leading basis vectors in use

    explicit FejerBasis(FreqLattice lat);
    FejerBasis(FreqLattice lat, std::size_t ord);
};

/// mu_{lambda,j} = prod_{r<=j} (1 - |nu_r| / (j!)^2), nu_r = j! * c_r where
/// lambda = sum c_r omega_r. Zero when some nu_r is fractional, exceeds
/// (j!)^2, or lambda uses omega_r with r > j.
Rational multiplier(const FreqVector& lambda, int j, const FejerBasis& basis,
                    int max_order = kDefaultMaxFejerOrder);

/// Q_j(f): coefficient mu_{lambda,j} a(lambda, f) at each lambda in Sp f.
ExpSum fejer_approx(const ExpSum& f, int j, const FejerBasis& basis, int max_order = kDefaultMaxFejerOrder);
ExpMapping fejer_approx(const ExpMapping& f, int j, const FejerBasis& basis,
                        int max_order = kDefaultMaxFejerOrder);

/// A box x + iy of the tube with a tensor sampling grid.
struct TubeWindow {
    RVector y_lo, y_hi;
    RVector x_lo, x_hi;
    std::vector<int> grid_x, grid_y;  // per-axis sample counts, >= 2

    std::size_t dim() const { return y_lo.size(); }
    void validate() const;

    /// Same sample count on every axis, x over [x_lo, x_hi], y over [y_lo, y_hi].
    static TubeWindow box(RVector x_lo, RVector x_hi, RVector y_lo, RVector y_hi, int samples);
};

struct SupOptions {
    // Polish the best grid samples by a local ascent clamped to the window.
    bool refine = false;
    int refine_starts = 8;
};

/// max over window samples of max_l |F_l(z) - G_l(z)|.
double sup_distance(const ExpMapping& f, const ExpMapping& g, const TubeWindow& w, const SupOptions& opts = {});

}  // namespace expamoeba
