#pragma once

// Delta-traces, closed spectra, the Ronkin dimension dim_H Z_F, and the
// Kazarnovskii functional K[F^Delta].

#include <cstdint>
#include <optional>
#include <vector>

#include "expamoeba/polytope.hpp"

namespace expamoeba {

/// Keeps, in every component, the terms whose frequency lies on the face of
/// its Newton polytope exposed by u (u = 0 keeps everything).
ExpMapping delta_trace(const ExpMapping& f, const FreqVector& u);

/// Every face of Gamma_F with its summand decomposition, in faces() order.
std::vector<FaceDecomposition> face_decompositions(const ExpMapping& f);

struct ClosedSpectraResult {
    bool closed = false;
    std::optional<FaceDecomposition> witness;  // a violating face when !closed
};

/// True iff every face of Gamma_F with dim < m has a single-point summand.
ClosedSpectraResult closed_spectra(const ExpMapping& f);

/// n minus the least dimension of a face of Gamma_F without a point summand;
/// nullopt (empty Z_F) when every face has one.
std::optional<int> z_dim(const ExpMapping& f);

/// The same quantity computed from the dual cones directly: the largest
/// dimension of a cell of the normal-fan arrangement on which every
/// component attains its maximum at two or more spectrum points.
std::optional<int> z_dim_dual_cones(const ExpMapping& f);

/// K[F^Delta](z) = sum_l exp(max_{lambda in Delta_l} <Im z, lambda>) |f_l^Delta(z)|.
double k_functional(const ExpMapping& f, const FreqVector& u, const CVector& z);

struct InfKOptions {
    double lateral = 2.0;  // y offsets uniform in [-lateral, lateral]^n
    double polish_factor = 1.0;  // polish samples below polish_factor * best so far
};

/// Sampled upper bound on inf_z K[F^Delta](z). A sample is polished by a
/// local descent when its raw value is below polish_factor times the best so
/// far; the estimate is nonincreasing along a fixed seed's sample prefix.
double estimate_inf_K(const ExpMapping& f, const FreqVector& u, std::size_t samples, std::uint64_t seed,
                      const InfKOptions& opts = {});

struct KEstimate {
    FaceDecomposition face;
    double inf_k = 0.0;
    std::size_t samples = 0;
    std::vector<std::size_t> zero_trace_components;  // identically zero traces
};

struct RegularityReport {
    std::size_t m = 0, n = 0;
    bool closed_spectra = false;
    std::optional<FaceDecomposition> witness;
    std::optional<int> z_dim;
    bool ronkin_ok = false;
    std::vector<KEstimate> k_estimates;     // faces with dim < m
    std::vector<FaceDecomposition> faces;  // all faces of Gamma_F
};

struct AnalyzeOptions {
    std::size_t samples = 4096;
    std::uint64_t seed = 1;
};

/// Full report; cross-checks closed spectra against the dual-cone dimension
/// and throws std::logic_error if the two routes disagree.
RegularityReport analyze(const ExpMapping& f, const AnalyzeOptions& opts = {});

}  // namespace expamoeba
