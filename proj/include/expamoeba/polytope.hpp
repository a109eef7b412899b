#pragma once

// Exact Newton polytopes in frequency space (ambient dimension <= 3):
// convex hulls, Minkowski sums, face lattices with exposing normals, and
// the unique face-summand decomposition of faces of Minkowski sums.
//
// The polytope of f is conv(Sp f) itself rather than its image under
// lambda -> -i lambda; every face and dimension statement is unchanged by
// that relabeling.

#include <vector>

#include "expamoeba/exp_sum.hpp"

namespace expamoeba {

inline constexpr std::size_t kMaxPolytopeDim = 3;

struct Face {
    std::vector<FreqVector> vertices;  // sorted lexicographically
    FreqVector normal;                 // primitive integer vector; zero for the whole polytope
    int dim = 0;

    bool is_point() const { return vertices.size() == 1; }
};

class Polytope {
public:
    Polytope() = default;
    /// Convex hull of `points` (need not be in convex position).
    Polytope(std::size_t dim, const std::vector<FreqVector>& points);

    std::size_t ambient_dim() const { return dim_; }
    int affine_dim() const { return affine_dim_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<FreqVector>& vertices() const { return vertices_; }

    struct Facet {
        FreqVector normal;                // outward, primitive integer
        std::vector<std::size_t> corner;  // indices into vertices()
    };
    /// Facets relative to the affine hull: normals expose them within it.
    const std::vector<Facet>& facets() const { return facets_; }
    /// Edges as vertex index pairs (only for affine dimension >= 2).
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

    friend bool operator==(const Polytope& a, const Polytope& b) {
        return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
    }

private:
    std::size_t dim_ = 0;
    int affine_dim_ = -1;
    std::vector<FreqVector> vertices_;
    std::vector<Facet> facets_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

struct FaceDecomposition {
    Face face;                   // face of the Minkowski sum
    std::vector<Face> summands;  // face of each summand exposed by the same normal

    bool has_point_summand() const;
};

/// Affine dimension of a point set (-1 for the empty set).
int affine_dimension(const std::vector<FreqVector>& points);

Polytope newton_polytope(const ExpSum& f);

Polytope minkowski_sum(const Polytope& p, const Polytope& q);
Polytope minkowski_sum(const std::vector<Polytope>& summands);

/// Every face: vertices, edges, 2-faces (in 3-D), and the polytope itself.
/// Sorted by dimension, then by vertex list.
std::vector<Face> faces(const Polytope& p);

/// argmax of <u, v> over the vertices; u = 0 gives the whole polytope.
Face face_of(const Polytope& p, const FreqVector& u);

/// Faces exposed by u (u != 0) in each summand, checked against the face of
/// their Minkowski sum exposed by u.
FaceDecomposition face_decompose(const FreqVector& u, const std::vector<Polytope>& summands);
FaceDecomposition face_decompose(const FreqVector& u, const std::vector<Polytope>& summands, const Polytope& sum);

/// max over vertices of <y, v>.
double support_value(const Polytope& p, const RVector& y);
Rational support_value(const Polytope& p, const FreqVector& y);

/// Dimension of the dual cone of `face` (linear span of the normals of the
/// facets containing it plus the orthogonal complement of the affine hull).
std::size_t dual_cone_dimension(const Polytope& p, const Face& face);

}  // namespace expamoeba
