#pragma once

// Amoeba membership and rasters in y-space.
//
// Verdicts are three-valued: CertifiedOut is rigorous (one term dominates
// the others in modulus on the whole query box), LikelyIn is numeric (a
// point x with max_l |f_l(x + iy)| <= tol was found), Unknown is neither.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expamoeba/characters.hpp"
#include "expamoeba/lattice.hpp"

namespace expamoeba {

enum class VerdictKind { CertifiedOut, LikelyIn, Unknown };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    // LikelyIn / Unknown: best max_l |f_l| found. CertifiedOut: the
    // certificate ratio (sum of the other moduli over the dominant one, < 1).
    double residual = 0.0;
    RVector witness_x;                // LikelyIn only
    std::size_t certified_by = 0;     // CertifiedOut: dominated component
    std::size_t dominant_term = 0;    // CertifiedOut: index into its terms()

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

const char* verdict_name(VerdictKind k);  // "out", "in", "unknown"

struct MembershipOptions {
    double tol = 1e-6;
    int budget = 4096;  // coarse grid points on the real torus
    std::uint64_t seed = 0;
    int descent_iterations = 50;
    // Half-widths of a box around y on which CertifiedOut must hold; empty
    // means the single point y.
    RVector half_width;
};

/// Dominating-term certificate alone: the component/term dominating on the
/// whole box y +- half_width, if any.
std::optional<Verdict> domination_certificate(const ExpMapping& f, const RVector& y, const RVector& half_width = {});

Verdict membership(const ExpMapping& f, const RVector& y, const MembershipOptions& opts = {});

struct Window {
    double y1_lo = -1, y1_hi = 1, y2_lo = -1, y2_hi = 1;
    void validate() const;
    friend bool operator==(const Window&, const Window&) = default;
};

struct RasterMeta {
    std::uint64_t mapping_hash = 0;
    std::vector<std::vector<double>> phases;  // one phase list per character used
    double tol = 1e-6;
    int budget = 4096;
    std::uint64_t seed = 0;
    std::size_t components = 0;  // m of the mapping; 0 when unknown (read from CSV)
};

struct Raster {
    Window window;
    std::size_t rows = 0, cols = 0;  // rows index y2 (bottom up), cols index y1
    std::vector<Verdict> cells;      // row-major
    RasterMeta meta;

    const Verdict& at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
    Verdict& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
    double y1(std::size_t j) const;
    double y2(std::size_t i) const;
    double cell_width() const { return (window.y1_hi - window.y1_lo) / static_cast<double>(cols); }
    double cell_height() const { return (window.y2_hi - window.y2_lo) / static_cast<double>(rows); }
    std::size_t count(VerdictKind k) const;
};

struct RasterOptions {
    double tol = 1e-6;
    int budget = 4096;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: AMOEBA_THREADS, else hardware concurrency
};

/// Cell (i, j) holds the membership verdict of perturb(F, chi) at the cell
/// center, with CertifiedOut certified on the whole closed cell.
Raster raster(const ExpMapping& f, const std::optional<Character>& chi, const Window& w, std::size_t rows,
              std::size_t cols, const RasterOptions& opts = {});

/// Union of rasters over the identity and num_chars - 1 random characters.
Raster y_amoeba_raster(const ExpMapping& f, const Window& w, std::size_t rows, std::size_t cols,
                       std::size_t num_chars, const RasterOptions& opts = {});

/// lambda -> M lambda on every frequency, so the result G satisfies
/// G(z) = F(M^T z). M must be square, integer, and nonsingular.
ExpMapping map_spectra(const ExpMapping& f, const IntMatrix& m);

/// FNV-1a over a canonical text form of the mapping.
std::uint64_t mapping_hash(const ExpMapping& f);

void write_csv(std::ostream& os, const Raster& r);
/// Reads the CSV written by write_csv. Meta is not stored in the CSV.
Raster read_csv(std::istream& is);

std::string to_svg(const Raster& r);

}  // namespace expamoeba
