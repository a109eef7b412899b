#include "expamoeba/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "expamoeba/errors.hpp"
#include "expamoeba/lattice.hpp"

namespace expamoeba {

namespace {

void require_polytope_input(const ExpMapping& f) {
    if (f.dim() > kMaxPolytopeDim)
        throw UnsupportedDimension("regularity analysis supports n <= 3, got n = " + std::to_string(f.dim()));
    for (std::size_t l = 0; l < f.size(); ++l)
        if (f[l].is_zero()) throw InputError("component " + std::to_string(l + 1) + " is identically zero");
}

bool is_zero(const FreqVector& u) {
    return std::all_of(u.begin(), u.end(), [](const Rational& c) { return c == 0; });
}

Rational dot(const FreqVector& a, const FreqVector& b) {
    Rational s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Delta-trace terms in double form for fast repeated evaluation.
class TraceEvaluator {
public:
    TraceEvaluator(const ExpMapping& trace) : n_(trace.dim()) {
        for (const auto& c : trace.components()) {
            comps_.push_back({c.terms().size(), {}, c.freq_doubles()});
            for (const auto& t : c.terms()) comps_.back().coeffs.push_back(t.coeff);
        }
    }

    // x and y of length n each.
    double operator()(const double* x, const double* y) const {
        double k = 0.0;
        for (const auto& c : comps_) {
            if (c.size == 0) continue;
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < c.size; ++t) top = std::max(top, proj(y, &c.freqs[t * n_]));
            Complex s = 0.0;
            for (std::size_t t = 0; t < c.size; ++t) {
                const double* fr = &c.freqs[t * n_];
                s += c.coeffs[t] * std::exp(top - proj(y, fr)) * Complex(std::cos(proj(x, fr)), std::sin(proj(x, fr)));
            }
            k += std::abs(s);
        }
        return k;
    }

private:
    double proj(const double* v, const double* fr) const {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += v[k] * fr[k];
        return s;
    }

    struct Comp {
        std::size_t size;
        CVector coeffs;
        RVector freqs;
    };
    std::size_t n_;
    std::vector<Comp> comps_;
};

// Integer arithmetic for the dual-cone route.
using IVec = std::vector<Integer>;

IVec icross(const IVec& a, const IVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Integer idot(const IVec& a, const IVec& b) {
    Integer s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

bool izero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IVec iprimitive(IVec v) {
    Integer g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

IVec ineg(IVec v) {
    for (auto& x : v) x = -x;
    return v;
}

IVec iadd(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
    return r;
}

// Sign-canonical: first nonzero entry positive.
IVec canonical_line(IVec v) {
    v = iprimitive(std::move(v));
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0) v = ineg(std::move(v));
        break;
    }
    return v;
}

}  // namespace

ExpMapping delta_trace(const ExpMapping& f, const FreqVector& u) {
    if (u.size() != f.dim()) throw InputError("trace normal length differs from mapping dimension");
    std::vector<ExpSum> comps;
    for (const auto& c : f.components()) {
        std::vector<Term> kept;
        Rational best;
        for (const auto& t : c.terms()) {
            const Rational s = dot(u, t.freq);
            if (kept.empty() || s > best) {
                best = s;
                kept = {t};
            } else if (s == best) {
                kept.push_back(t);
            }
        }
        comps.emplace_back(f.dim(), std::move(kept));
    }
    return ExpMapping(f.dim(), std::move(comps));
}

std::vector<FaceDecomposition> face_decompositions(const ExpMapping& f) {
    require_polytope_input(f);
    std::vector<Polytope> summands;
    for (const auto& c : f.components()) summands.push_back(newton_polytope(c));
    const Polytope sum = minkowski_sum(summands);
    std::vector<FaceDecomposition> out;
    for (const auto& face : faces(sum)) {
        if (is_zero(face.normal)) {
            FaceDecomposition whole;
            whole.face = face;
            for (const auto& s : summands) whole.summands.push_back(face_of(s, face.normal));
            out.push_back(std::move(whole));
            continue;
        }
        FaceDecomposition dec = face_decompose(face.normal, summands, sum);
        if (dec.face.vertices != face.vertices) throw std::logic_error("face normal does not expose its face");
        out.push_back(std::move(dec));
    }
    return out;
}

namespace {

ClosedSpectraResult closed_from(const std::vector<FaceDecomposition>& decs, std::size_t m) {
    for (const auto& d : decs)
        if (d.face.dim < static_cast<int>(m) && !d.has_point_summand()) return {false, d};
    return {true, std::nullopt};
}

std::optional<int> zdim_from(const std::vector<FaceDecomposition>& decs, std::size_t n) {
    std::optional<int> least;
    for (const auto& d : decs)
        if (!d.has_point_summand()) least = least ? std::min(*least, d.face.dim) : d.face.dim;
    if (!least) return std::nullopt;
    return static_cast<int>(n) - *least;
}

}  // namespace

ClosedSpectraResult closed_spectra(const ExpMapping& f) { return closed_from(face_decompositions(f), f.size()); }

std::optional<int> z_dim(const ExpMapping& f) { return zdim_from(face_decompositions(f), f.dim()); }

std::optional<int> z_dim_dual_cones(const ExpMapping& f) {
    require_polytope_input(f);
    const std::size_t n = f.dim();

    // Integer spectra (positive rescaling leaves every argmax unchanged).
    Integer l = 1;
    for (const auto& c : f.components())
        for (const auto& t : c.terms())
            for (const auto& q : t.freq) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<std::vector<IVec>> spectra;
    for (const auto& c : f.components()) {
        spectra.emplace_back();
        for (const auto& t : c.terms()) {
            IVec v(n);
            for (std::size_t k = 0; k < n; ++k) {
                Rational s = t.freq[k] * l;
                v[k] = s.get_num();
            }
            spectra.back().push_back(std::move(v));
        }
    }

    // u lies in Z_F iff every component attains max <u, .> at >= 2 points.
    auto in_z = [&](const IVec& u) {
        for (const auto& sp : spectra) {
            Integer best;
            std::size_t count = 0;
            for (const auto& v : sp) {
                const Integer s = idot(u, v);
                if (count == 0 || s > best) best = s, count = 1;
                else if (s == best) ++count;
            }
            if (count < 2) return false;
        }
        return true;
    };

    // Hyperplanes {<u, d> = 0} for differences d within one spectrum.
    std::set<IVec> normals;
    for (const auto& sp : spectra)
        for (std::size_t i = 0; i < sp.size(); ++i)
            for (std::size_t j = i + 1; j < sp.size(); ++j) {
                IVec d(n);
                for (std::size_t k = 0; k < n; ++k) d[k] = sp[j][k] - sp[i][k];
                normals.insert(canonical_line(std::move(d)));
            }

    std::vector<std::pair<IVec, int>> candidates{{IVec(n, Integer(0)), 0}};
    if (n == 2) {
        for (const auto& d : normals) {
            const IVec r{-d[1], d[0]};
            candidates.emplace_back(r, 1);
            candidates.emplace_back(ineg(r), 1);
        }
    } else if (n == 3) {
        const std::vector<IVec> hs(normals.begin(), normals.end());
        std::vector<std::set<IVec>> rays_on(hs.size());
        for (std::size_t a = 0; a < hs.size(); ++a)
            for (std::size_t b = a + 1; b < hs.size(); ++b) {
                const IVec c = iprimitive(icross(hs[a], hs[b]));
                if (izero(c)) continue;
                for (const IVec& r : {c, ineg(c)}) {
                    candidates.emplace_back(r, 1);
                    rays_on[a].insert(r);
                    rays_on[b].insert(r);
                }
            }
        for (std::size_t a = 0; a < hs.size(); ++a) {
            const IVec& d = hs[a];
            IVec b1;
            for (std::size_t k = 0; k < 3 && (b1.empty() || izero(b1)); ++k) {
                IVec e(3, Integer(0));
                e[k] = 1;
                b1 = icross(d, e);
            }
            const IVec b2 = icross(d, b1);
            std::vector<IVec> rays(rays_on[a].begin(), rays_on[a].end());
            if (rays.empty()) {
                candidates.emplace_back(b1, 2);
                continue;
            }
            // Angular order in the plane, through the linear chart r -> (<r,b1>, <r,b2>).
            auto chart = [&](const IVec& r) { return std::pair{idot(r, b1), idot(r, b2)}; };
            auto upper = [](const std::pair<Integer, Integer>& p) {
                return p.second > 0 || (p.second == 0 && p.first > 0);
            };
            std::sort(rays.begin(), rays.end(), [&](const IVec& r, const IVec& s) {
                const auto p = chart(r), q = chart(s);
                if (upper(p) != upper(q)) return upper(p);
                return p.first * q.second - p.second * q.first > 0;
            });
            for (std::size_t i = 0; i < rays.size(); ++i) {
                const IVec& r = rays[i];
                const IVec& s = rays[(i + 1) % rays.size()];
                const IVec mid = iadd(r, s);
                if (!izero(mid)) {
                    candidates.emplace_back(mid, 2);
                } else {
                    const IVec perp = icross(d, r);
                    candidates.emplace_back(perp, 2);
                    candidates.emplace_back(ineg(perp), 2);
                }
            }
        }
    }
    // Open chambers of the arrangement never lie in Z_F: every maximum is unique there.

    std::optional<int> dim;
    for (const auto& [u, cell_dim] : candidates)
        if (in_z(u)) dim = dim ? std::max(*dim, cell_dim) : cell_dim;
    return dim;
}

double k_functional(const ExpMapping& f, const FreqVector& u, const CVector& z) {
    if (z.size() != f.dim()) throw InputError("K functional: point length differs from mapping dimension");
    const TraceEvaluator eval(delta_trace(f, u));
    RVector x(z.size()), y(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) x[k] = z[k].real(), y[k] = z[k].imag();
    return eval(x.data(), y.data());
}

double estimate_inf_K(const ExpMapping& f, const FreqVector& u, std::size_t samples, std::uint64_t seed,
                      const InfKOptions& opts) {
    if (u.size() != f.dim()) throw InputError("K estimate: normal length differs from mapping dimension");
    const std::size_t n = f.dim();
    const TraceEvaluator eval(delta_trace(f, u));
    const double period = 2.0 * std::numbers::pi * clear_to_integer(f).scale.get_d();

    RVector dir = to_doubles(u);
    double norm = 0.0;
    for (double c : dir) norm += c * c;
    norm = std::sqrt(norm);
    for (double& c : dir) c = norm > 0.0 ? c / norm : 0.0;
    static constexpr double radii[] = {0.0, 1.0, 2.0, 4.0, 8.0};

    std::mt19937_64 gen(seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    auto k_at = [&](const RVector& p) { return eval(p.data(), p.data() + n); };

    double best = std::numeric_limits<double>::infinity();
    RVector p(2 * n);
    for (std::size_t s = 0; s < samples; ++s) {
        const double r = radii[s % 5];
        for (std::size_t k = 0; k < n; ++k) p[k] = period * uniform();
        for (std::size_t k = 0; k < n; ++k) p[n + k] = r * dir[k] + opts.lateral * (2.0 * uniform() - 1.0);
        double v = k_at(p);
        if (s == 0 || v < opts.polish_factor * best) {
            // Compass descent in (x, y) with a fixed halving schedule.
            RVector q = p;
            double step = 0.25;
            for (int iter = 0; iter < 400 && step > 1e-12; ++iter) {
                bool moved = false;
                for (std::size_t a = 0; a < 2 * n && !moved; ++a)
                    for (double sgn : {1.0, -1.0}) {
                        RVector t = q;
                        t[a] += sgn * step;
                        const double w = k_at(t);
                        if (w < v) {
                            v = w, q = std::move(t), moved = true;
                            break;
                        }
                    }
                if (!moved) step *= 0.5;
            }
        }
        best = std::min(best, v);
    }
    return best;
}

RegularityReport analyze(const ExpMapping& f, const AnalyzeOptions& opts) {
    require_polytope_input(f);
    RegularityReport rep;
    rep.m = f.size();
    rep.n = f.dim();
    rep.faces = face_decompositions(f);

    const ClosedSpectraResult cs = closed_from(rep.faces, rep.m);
    rep.closed_spectra = cs.closed;
    rep.witness = cs.witness;
    rep.z_dim = zdim_from(rep.faces, rep.n);
    const int n = static_cast<int>(rep.n), m = static_cast<int>(rep.m);
    rep.ronkin_ok = !rep.z_dim || *rep.z_dim <= n - m;

    const std::optional<int> dual = z_dim_dual_cones(f);
    if (dual != rep.z_dim)
        throw std::logic_error("face-lattice and dual-cone routes disagree on dim Z_F");
    if (rep.closed_spectra != (!dual || *dual <= n - m))
        throw std::logic_error("closed spectra disagrees with the dimension criterion");

    for (const auto& dec : rep.faces) {
        if (dec.face.dim >= m) continue;
        KEstimate est;
        est.face = dec;
        est.samples = opts.samples;
        est.inf_k = estimate_inf_K(f, dec.face.normal, opts.samples, opts.seed);
        const ExpMapping tr = delta_trace(f, dec.face.normal);
        for (std::size_t l = 0; l < tr.size(); ++l)
            if (tr[l].is_zero()) est.zero_trace_components.push_back(l);
        rep.k_estimates.push_back(std::move(est));
    }
    return rep;
}

}  // namespace expamoeba
