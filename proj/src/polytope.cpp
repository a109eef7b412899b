#include "expamoeba/polytope.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <tuple>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "expamoeba/errors.hpp"
#include "expamoeba/lattice.hpp"

namespace expamoeba {

namespace {

using IVec = std::vector<Integer>;

Integer dot(const IVec& a, const IVec& b) {
    Integer s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

IVec sub(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}

IVec cross(const IVec& a, const IVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool is_zero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IVec primitive(IVec v) {
    Integer g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

// Primitive integer vector with the direction of a rational vector.
FreqVector primitive_direction(const FreqVector& u) {
    Integer l = 1;
    for (const auto& c : u) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    IVec iv(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        Rational s = u[k] * l;
        iv[k] = s.get_num();
    }
    iv = primitive(std::move(iv));
    FreqVector out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = Rational(iv[k]);
    return out;
}

// Reduced row echelon form over Q; returns pivot columns.
std::vector<std::size_t> rref(std::vector<FreqVector>& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[row], a[p]);
        const Rational inv = 1 / a[row][c];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][c] == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t k = 0; k < cols; ++k) a[i][k] -= f * a[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    a.resize(row);
    return pivots;
}

struct AffineFrame {
    std::vector<FreqVector> directions;  // rref basis of the direction space
    std::vector<std::size_t> pivots;     // projection onto these coordinates is injective on the hull
};

AffineFrame affine_frame(const std::vector<FreqVector>& pts, std::size_t n) {
    AffineFrame fr;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        FreqVector d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = pts[i][k] - pts[0][k];
        fr.directions.push_back(std::move(d));
    }
    fr.pivots = rref(fr.directions, n);
    return fr;
}

// Orthogonal complement of the row space of an rref matrix.
std::vector<FreqVector> complement(const AffineFrame& fr, std::size_t n) {
    std::vector<FreqVector> out;
    std::set<std::size_t> piv(fr.pivots.begin(), fr.pivots.end());
    for (std::size_t free = 0; free < n; ++free) {
        if (piv.count(free)) continue;
        FreqVector v(n, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < fr.pivots.size(); ++r) v[fr.pivots[r]] = -fr.directions[r][free];
        out.push_back(std::move(v));
    }
    return out;
}

// Strict monotone chain; returns corner indices (into ids' values) in ccw order.
std::vector<std::size_t> chain_2d(const std::vector<std::array<Integer, 2>>& pts, std::vector<std::size_t> ids) {
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    ids.erase(std::unique(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              ids.end());
    if (ids.size() < 3) return ids;
    auto turn = [&](std::size_t o, std::size_t a, std::size_t b) -> Integer {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<std::size_t> h(2 * ids.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        while (k >= 2 && turn(h[k - 2], h[k - 1], ids[i]) <= 0) --k;
        h[k++] = ids[i];
    }
    for (std::size_t i = ids.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && turn(h[k - 2], h[k - 1], ids[i]) <= 0) --k;
        h[k++] = ids[i];
    }
    h.resize(k - 1);
    return h;
}

struct RawFacet {
    IVec normal;                      // in projected coordinates
    std::vector<std::size_t> corner;  // point indices
};

struct RawHull {
    std::vector<std::size_t> corners;
    std::vector<RawFacet> facets;
    std::set<std::pair<std::size_t, std::size_t>> edges;
};

RawHull hull_1d(const std::vector<IVec>& q) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < q.size(); ++i) {
        if (q[i][0] < q[lo][0]) lo = i;
        if (q[i][0] > q[hi][0]) hi = i;
    }
    RawHull h;
    h.corners = {lo, hi};
    h.facets = {RawFacet{{Integer(-1)}, {lo}}, RawFacet{{Integer(1)}, {hi}}};
    return h;
}

RawHull hull_2d(const std::vector<IVec>& q) {
    std::vector<std::array<Integer, 2>> pts(q.size());
    std::vector<std::size_t> ids(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) pts[i] = {q[i][0], q[i][1]}, ids[i] = i;
    RawHull h;
    h.corners = chain_2d(pts, ids);
    for (std::size_t k = 0; k < h.corners.size(); ++k) {
        const std::size_t a = h.corners[k], b = h.corners[(k + 1) % h.corners.size()];
        // ccw polygon: outward normal of a->b is (dy, -dx)
        IVec nrm = primitive({q[b][1] - q[a][1], q[a][0] - q[b][0]});
        h.facets.push_back(RawFacet{std::move(nrm), {a, b}});
        h.edges.insert(std::minmax(a, b));
    }
    return h;
}

// Gift wrapping over exact orientation predicates.
RawHull hull_3d(const std::vector<IVec>& q) {
    const std::size_t np = q.size();
    std::map<IVec, RawFacet> known;
    std::deque<IVec> pending;

    auto add_facet = [&](IVec nrm, std::size_t anchor) {
        nrm = primitive(std::move(nrm));
        if (known.count(nrm)) return;
        const Integer c = dot(nrm, q[anchor]);
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < np; ++i) {
            const Integer v = dot(nrm, q[i]);
            if (v > c) throw std::logic_error("gift wrapping produced a non-supporting plane");
            if (v == c) on.push_back(i);
        }
        std::size_t drop = 0;
        for (std::size_t k = 1; k < 3; ++k)
            if (abs(nrm[k]) > abs(nrm[drop])) drop = k;
        std::vector<std::array<Integer, 2>> proj(np);
        for (std::size_t i : on) proj[i] = {q[i][(drop + 1) % 3], q[i][(drop + 2) % 3]};
        known.emplace(nrm, RawFacet{nrm, chain_2d(proj, on)});
        pending.push_back(nrm);
    };

    // Initial facet through the lexicographically smallest point, which is a vertex.
    std::size_t a = 0;
    for (std::size_t i = 1; i < np; ++i)
        if (q[i] < q[a]) a = i;
    for (std::size_t j = 0; j < np && known.empty(); ++j) {
        for (std::size_t k = j + 1; k < np && known.empty(); ++k) {
            if (j == a || k == a) continue;
            const IVec nrm = cross(sub(q[j], q[a]), sub(q[k], q[a]));
            if (is_zero(nrm)) continue;
            bool le = true, ge = true;
            for (std::size_t i = 0; i < np && (le || ge); ++i) {
                const Integer s = dot(nrm, sub(q[i], q[a]));
                if (s > 0) le = false;
                if (s < 0) ge = false;
            }
            if (le) add_facet(nrm, a);
            else if (ge) {
                IVec neg = nrm;
                for (auto& x : neg) x = -x;
                add_facet(neg, a);
            }
        }
    }
    if (known.empty()) throw std::logic_error("3-D hull: no initial facet found");

    while (!pending.empty()) {
        const RawFacet facet = known.at(pending.front());
        pending.pop_front();
        const auto& cyc = facet.corner;
        for (std::size_t e = 0; e < cyc.size(); ++e) {
            const std::size_t p = cyc[e], r = cyc[(e + 1) % cyc.size()];
            for (auto [s, t] : {std::pair{p, r}, std::pair{r, p}}) {
                const IVec axis = sub(q[t], q[s]);
                std::size_t cand = np;
                for (std::size_t i = 0; i < np; ++i) {
                    if (cand == np) {
                        if (!is_zero(cross(axis, sub(q[i], q[s])))) cand = i;
                        continue;
                    }
                    if (dot(cross(axis, sub(q[cand], q[s])), sub(q[i], q[s])) > 0) cand = i;
                }
                add_facet(cross(axis, sub(q[cand], q[s])), s);
            }
        }
    }

    RawHull h;
    std::set<std::size_t> corners;
    for (auto& [nrm, f] : known) {
        for (std::size_t e = 0; e < f.corner.size(); ++e) {
            corners.insert(f.corner[e]);
            h.edges.insert(std::minmax(f.corner[e], f.corner[(e + 1) % f.corner.size()]));
        }
        h.facets.push_back(f);
    }
    h.corners.assign(corners.begin(), corners.end());
    return h;
}

bool is_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
    return std::all_of(small.begin(), small.end(),
                       [&](std::size_t v) { return std::find(big.begin(), big.end(), v) != big.end(); });
}

}  // namespace

Polytope::Polytope(std::size_t dim, const std::vector<FreqVector>& points) : dim_(dim) {
    if (dim > kMaxPolytopeDim)
        throw UnsupportedDimension("polytope operations support ambient dimension <= 3, got " + std::to_string(dim));
    std::set<FreqVector> uniq;
    for (const auto& p : points) {
        if (p.size() != dim) throw InputError("polytope point has wrong length");
        uniq.insert(p);
    }
    if (uniq.empty()) return;
    const std::vector<FreqVector> pts(uniq.begin(), uniq.end());

    const AffineFrame fr = affine_frame(pts, dim);
    affine_dim_ = static_cast<int>(fr.pivots.size());

    // Integer coordinates on the pivot axes.
    Integer l = 1;
    for (const auto& p : pts)
        for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<IVec> q(pts.size(), IVec(fr.pivots.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t a = 0; a < fr.pivots.size(); ++a) {
            Rational s = pts[i][fr.pivots[a]] * l;
            q[i][a] = s.get_num();
        }

    RawHull raw;
    switch (affine_dim_) {
        case 0: raw.corners = {0}; break;
        case 1: raw = hull_1d(q); break;
        case 2: raw = hull_2d(q); break;
        default: raw = hull_3d(q); break;
    }

    std::vector<std::size_t> order = raw.corners;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    std::map<std::size_t, std::size_t> index_of;
    for (std::size_t v = 0; v < order.size(); ++v) {
        index_of[order[v]] = v;
        vertices_.push_back(pts[order[v]]);
    }
    for (const auto& f : raw.facets) {
        Facet out;
        out.normal = FreqVector(dim, Rational(0));
        for (std::size_t a = 0; a < fr.pivots.size(); ++a) out.normal[fr.pivots[a]] = Rational(f.normal[a]);
        for (std::size_t c : f.corner) out.corner.push_back(index_of.at(c));
        std::sort(out.corner.begin(), out.corner.end());
        facets_.push_back(std::move(out));
    }
    std::sort(facets_.begin(), facets_.end(), [](const Facet& a, const Facet& b) { return a.corner < b.corner; });
    for (auto [s, t] : raw.edges) edges_.emplace_back(std::minmax(index_of.at(s), index_of.at(t)));
    std::sort(edges_.begin(), edges_.end());
}

bool FaceDecomposition::has_point_summand() const {
    return std::any_of(summands.begin(), summands.end(), [](const Face& f) { return f.is_point(); });
}

int affine_dimension(const std::vector<FreqVector>& points) {
    if (points.empty()) return -1;
    std::vector<FreqVector> diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        FreqVector d(points[i].size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = points[i][k] - points[0][k];
        diffs.push_back(std::move(d));
    }
    return static_cast<int>(rational_rank(diffs));
}

Polytope newton_polytope(const ExpSum& f) {
    std::vector<FreqVector> pts;
    for (const auto& t : f.terms()) pts.push_back(t.freq);
    return Polytope(f.dim(), pts);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
    if (p.ambient_dim() != q.ambient_dim()) throw InputError("Minkowski sum of polytopes in different dimensions");
    std::vector<FreqVector> pts;
    for (const auto& a : p.vertices())
        for (const auto& b : q.vertices()) {
            FreqVector s(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) s[k] = a[k] + b[k];
            pts.push_back(std::move(s));
        }
    return Polytope(p.ambient_dim(), pts);
}

Polytope minkowski_sum(const std::vector<Polytope>& summands) {
    if (summands.empty()) throw InputError("Minkowski sum of no polytopes");
    Polytope acc = summands.front();
    for (std::size_t i = 1; i < summands.size(); ++i) acc = minkowski_sum(acc, summands[i]);
    return acc;
}

std::vector<Face> faces(const Polytope& p) {
    std::vector<Face> out;
    if (p.empty()) return out;
    const std::size_t n = p.ambient_dim();
    auto make = [&](std::vector<std::size_t> ids, int dim) {
        std::sort(ids.begin(), ids.end());
        Face f;
        f.dim = dim;
        for (std::size_t i : ids) f.vertices.push_back(p.vertices()[i]);
        f.normal = FreqVector(n, Rational(0));
        for (const auto& facet : p.facets())
            if (is_subset(ids, facet.corner))
                for (std::size_t k = 0; k < n; ++k) f.normal[k] += facet.normal[k];
        f.normal = primitive_direction(f.normal);
        out.push_back(std::move(f));
    };
    const int d = p.affine_dim();
    if (d >= 1)
        for (std::size_t v = 0; v < p.vertices().size(); ++v) make({v}, 0);
    if (d >= 2)
        for (auto [a, b] : p.edges()) make({a, b}, 1);
    if (d >= 3)
        for (const auto& facet : p.facets()) make(facet.corner, 2);
    Face whole;
    whole.dim = d;
    whole.vertices = p.vertices();
    whole.normal = FreqVector(n, Rational(0));
    out.push_back(std::move(whole));
    std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
        return std::tie(a.dim, a.vertices) < std::tie(b.dim, b.vertices);
    });
    return out;
}

Face face_of(const Polytope& p, const FreqVector& u) {
    if (u.size() != p.ambient_dim()) throw InputError("normal length differs from polytope dimension");
    Face f;
    f.normal = primitive_direction(u);
    Rational best;
    for (const auto& v : p.vertices()) {
        Rational s = 0;
        for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
        if (f.vertices.empty() || s > best) {
            best = s;
            f.vertices = {v};
        } else if (s == best) {
            f.vertices.push_back(v);
        }
    }
    f.dim = affine_dimension(f.vertices);
    return f;
}

FaceDecomposition face_decompose(const FreqVector& u, const std::vector<Polytope>& summands) {
    return face_decompose(u, summands, minkowski_sum(summands));
}

FaceDecomposition face_decompose(const FreqVector& u, const std::vector<Polytope>& summands, const Polytope& sum) {
    if (std::all_of(u.begin(), u.end(), [](const Rational& c) { return c == 0; }))
        throw InputError("face decomposition needs a nonzero normal");
    FaceDecomposition dec;
    dec.face = face_of(sum, u);
    std::vector<Polytope> parts;
    for (const auto& s : summands) {
        dec.summands.push_back(face_of(s, u));
        parts.emplace_back(s.ambient_dim(), dec.summands.back().vertices);
    }
    if (minkowski_sum(parts).vertices() != dec.face.vertices)
        throw std::logic_error("face summands do not add up to the face of the Minkowski sum");
    return dec;
}

double support_value(const Polytope& p, const RVector& y) {
    if (y.size() != p.ambient_dim()) throw InputError("support function argument has wrong length");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices()) {
        double s = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) s += y[k] * v[k].get_d();
        best = std::max(best, s);
    }
    return best;
}

Rational support_value(const Polytope& p, const FreqVector& y) {
    if (y.size() != p.ambient_dim()) throw InputError("support function argument has wrong length");
    if (p.empty()) throw InputError("support function of the empty polytope");
    Rational best;
    bool first = true;
    for (const auto& v : p.vertices()) {
        Rational s = 0;
        for (std::size_t k = 0; k < y.size(); ++k) s += y[k] * v[k];
        if (first || s > best) best = s, first = false;
    }
    return best;
}

std::size_t dual_cone_dimension(const Polytope& p, const Face& face) {
    const std::size_t n = p.ambient_dim();
    std::vector<std::size_t> ids;
    for (const auto& v : face.vertices) {
        auto it = std::lower_bound(p.vertices().begin(), p.vertices().end(), v);
        if (it == p.vertices().end() || *it != v) throw InputError("face vertex is not a polytope vertex");
        ids.push_back(static_cast<std::size_t>(it - p.vertices().begin()));
    }
    std::vector<FreqVector> gens = complement(affine_frame(p.vertices(), n), n);
    for (const auto& facet : p.facets())
        if (is_subset(ids, facet.corner)) gens.push_back(facet.normal);
    return rational_rank(gens);
}

}  // namespace expamoeba
