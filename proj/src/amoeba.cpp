#include "expamoeba/amoeba.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "expamoeba/errors.hpp"

namespace expamoeba {

const char* verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::CertifiedOut: return "out";
        case VerdictKind::LikelyIn: return "in";
        case VerdictKind::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t i, std::size_t j) {
    return splitmix64(splitmix64(seed + i) + j);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Components at fixed y in integer-cleared coordinates:
// f_l(x) = sum_t b_t exp(i <x, k_t>), with b_t already carrying exp(-<y', k_t>).
struct FixedY {
    std::size_t n = 0;
    struct Comp {
        CVector b;
        std::vector<long> k;  // flattened, n per term
    };
    std::vector<Comp> comps;

    void values(const RVector& x, CVector& out) const {
        out.assign(comps.size(), Complex(0.0));
        for (std::size_t l = 0; l < comps.size(); ++l) {
            const Comp& c = comps[l];
            for (std::size_t t = 0; t < c.b.size(); ++t) {
                double ph = 0.0;
                for (std::size_t a = 0; a < n; ++a) ph += x[a] * static_cast<double>(c.k[t * n + a]);
                out[l] += c.b[t] * Complex(std::cos(ph), std::sin(ph));
            }
        }
    }

    double sum_sq(const RVector& x) const {
        CVector v;
        values(x, v);
        double s = 0.0;
        for (const auto& c : v) s += std::norm(c);
        return s;
    }

    double max_abs(const RVector& x) const {
        CVector v;
        values(x, v);
        double s = 0.0;
        for (const auto& c : v) s = std::max(s, std::abs(c));
        return s;
    }

    // Real Jacobian of (Re f_l, Im f_l)_l with respect to x.
    void jacobian(const RVector& x, std::vector<RVector>& rows, RVector& res) const {
        rows.assign(2 * comps.size(), RVector(n, 0.0));
        res.assign(2 * comps.size(), 0.0);
        for (std::size_t l = 0; l < comps.size(); ++l) {
            const Comp& c = comps[l];
            for (std::size_t t = 0; t < c.b.size(); ++t) {
                double ph = 0.0;
                for (std::size_t a = 0; a < n; ++a) ph += x[a] * static_cast<double>(c.k[t * n + a]);
                const Complex e = c.b[t] * Complex(std::cos(ph), std::sin(ph));
                res[2 * l] += e.real();
                res[2 * l + 1] += e.imag();
                const Complex ie = Complex(0.0, 1.0) * e;
                for (std::size_t a = 0; a < n; ++a) {
                    const double kk = static_cast<double>(c.k[t * n + a]);
                    rows[2 * l][a] += kk * ie.real();
                    rows[2 * l + 1][a] += kk * ie.imag();
                }
            }
        }
    }
};

// Solves a small dense system in place; false when singular.
bool solve_dense(std::vector<RVector> a, RVector b, RVector& x) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-300) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double q = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= q * a[c][k];
            b[r] -= q * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return true;
}

// Levenberg-Marquardt on S(x) = sum_l |f_l(x)|^2.
void lm_polish(const FixedY& fy, RVector& x, double& s, int iterations) {
    const std::size_t n = fy.n;
    double mu = 1e-3;
    std::vector<RVector> jr;
    RVector res;
    for (int it = 0; it < iterations && s > 0.0; ++it) {
        fy.jacobian(x, jr, res);
        std::vector<RVector> a(n, RVector(n, 0.0));
        RVector g(n, 0.0);
        for (std::size_t r = 0; r < jr.size(); ++r)
            for (std::size_t p = 0; p < n; ++p) {
                g[p] -= jr[r][p] * res[r];
                for (std::size_t q = 0; q < n; ++q) a[p][q] += jr[r][p] * jr[r][q];
            }
        bool improved = false;
        for (int tries = 0; tries < 8 && !improved; ++tries) {
            auto damped = a;
            for (std::size_t p = 0; p < n; ++p) damped[p][p] += mu * (1.0 + a[p][p]);
            RVector dx;
            if (solve_dense(damped, g, dx)) {
                RVector t = x;
                for (std::size_t p = 0; p < n; ++p) t[p] += dx[p];
                const double st = fy.sum_sq(t);
                if (st < s) {
                    x = std::move(t), s = st, improved = true;
                    mu = std::max(mu / 3.0, 1e-15);
                    break;
                }
            }
            mu *= 4.0;
        }
        if (!improved) break;
    }
}

void compass(const FixedY& fy, RVector& x, double& s, int iterations) {
    double step = std::numbers::pi / 8.0;
    for (int it = 0; it < iterations; ++it) {
        bool moved = false;
        for (std::size_t a = 0; a < fy.n; ++a)
            for (double dir : {1.0, -1.0}) {
                RVector t = x;
                t[a] += dir * step;
                const double st = fy.sum_sq(t);
                if (st < s) {
                    x = std::move(t), s = st, moved = true;
                    break;
                }
            }
        if (!moved) step *= 0.5;
    }
}

long to_long(const Rational& q) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw NumericError("cleared frequency does not fit a machine integer");
    return q.get_num().get_si();
}

}  // namespace

std::optional<Verdict> domination_certificate(const ExpMapping& f, const RVector& y, const RVector& half_width) {
    const std::size_t n = f.dim();
    if (y.size() != n) throw InputError("membership: y has wrong length");
    if (!half_width.empty() && half_width.size() != n) throw InputError("membership: half-width has wrong length");
    for (double v : y)
        if (!std::isfinite(v)) throw InputError("membership: y must be finite");

    std::vector<RVector> corners;
    if (half_width.empty()) {
        corners.push_back(y);
    } else {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            RVector c = y;
            for (std::size_t a = 0; a < n; ++a) c[a] += (mask >> a & 1) ? half_width[a] : -half_width[a];
            corners.push_back(std::move(c));
        }
    }

    for (std::size_t l = 0; l < f.size(); ++l) {
        const auto& terms = f[l].terms();
        if (terms.empty()) continue;
        const RVector& fr = f[l].freq_doubles();
        auto log_mod = [&](std::size_t t, const RVector& at) {
            double s = std::log(std::abs(terms[t].coeff));
            for (std::size_t a = 0; a < n; ++a) s -= at[a] * fr[t * n + a];
            return s;
        };
        std::size_t top = 0;
        for (std::size_t t = 1; t < terms.size(); ++t)
            if (log_mod(t, y) > log_mod(top, y)) top = t;
        // The ratio is a sum of exponentials of affine functions of y, hence
        // convex: its maximum over the box sits at a corner.
        double worst = 0.0;
        for (const auto& c : corners) {
            const double lt = log_mod(top, c);
            double r = 0.0;
            for (std::size_t t = 0; t < terms.size(); ++t)
                if (t != top) r += std::exp(log_mod(t, c) - lt);
            worst = std::max(worst, r);
        }
        if (worst < 1.0 - 1e-12) {
            Verdict v;
            v.kind = VerdictKind::CertifiedOut;
            v.residual = worst;
            v.certified_by = l;
            v.dominant_term = top;
            return v;
        }
    }
    return std::nullopt;
}

Verdict membership(const ExpMapping& f, const RVector& y, const MembershipOptions& opts) {
    if (!(opts.tol > 0.0)) throw InputError("membership: tol must be positive");
    if (opts.budget < 1) throw InputError("membership: budget must be positive");
    if (auto cert = domination_certificate(f, y, opts.half_width)) return *cert;

    const std::size_t n = f.dim();
    const IntegerClearing cl = clear_to_integer(f);
    const double d = cl.scale.get_d();

    FixedY fy;
    fy.n = n;
    for (const auto& c : cl.mapping.components()) {
        FixedY::Comp comp;
        for (const auto& t : c.terms()) {
            double ph = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                const long k = to_long(t.freq[a]);
                comp.k.push_back(k);
                ph += (y[a] / d) * static_cast<double>(k);
            }
            comp.b.push_back(t.coeff * std::exp(-ph));
        }
        fy.comps.push_back(std::move(comp));
    }

    // Coarse grid over the torus with a seeded offset, evaluated through a
    // table of N-th roots of unity.
    const long grid_n = std::max(2L, std::lround(std::pow(static_cast<double>(opts.budget), 1.0 / static_cast<double>(n))));
    std::mt19937_64 gen(opts.seed);
    RVector offset(n);
    for (auto& o : offset) o = static_cast<double>(gen() >> 11) * 0x1.0p-53 * (kTwoPi / static_cast<double>(grid_n));
    CVector roots(static_cast<std::size_t>(grid_n));
    for (long r = 0; r < grid_n; ++r) roots[r] = unit_phase(kTwoPi * static_cast<double>(r) / static_cast<double>(grid_n));
    std::vector<CVector> shifted;  // b_t * exp(i <offset, k_t>)
    for (const auto& c : fy.comps) {
        CVector s(c.b.size());
        for (std::size_t t = 0; t < c.b.size(); ++t) {
            double ph = 0.0;
            for (std::size_t a = 0; a < n; ++a) ph += offset[a] * static_cast<double>(c.k[t * n + a]);
            s[t] = c.b[t] * Complex(std::cos(ph), std::sin(ph));
        }
        shifted.push_back(std::move(s));
    }

    constexpr std::size_t kStarts = 4;
    std::vector<std::pair<double, std::vector<long>>> best;
    std::vector<long> idx(n, 0);
    for (;;) {
        double s = 0.0;
        for (std::size_t l = 0; l < fy.comps.size(); ++l) {
            const auto& c = fy.comps[l];
            Complex v = 0.0;
            for (std::size_t t = 0; t < c.b.size(); ++t) {
                Complex e = shifted[l][t];
                for (std::size_t a = 0; a < n; ++a) {
                    long r = (c.k[t * n + a] * idx[a]) % grid_n;
                    if (r < 0) r += grid_n;
                    e *= roots[static_cast<std::size_t>(r)];
                }
                v += e;
            }
            s += std::norm(v);
        }
        if (best.size() < kStarts || s < best.back().first) {
            best.emplace_back(s, idx);
            std::stable_sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (best.size() > kStarts) best.pop_back();
        }
        std::size_t a = 0;
        while (a < n && ++idx[a] == grid_n) idx[a++] = 0;
        if (a == n) break;
    }

    double best_res = std::numeric_limits<double>::infinity();
    RVector best_x;
    for (const auto& [s0, ix] : best) {
        RVector x(n);
        for (std::size_t a = 0; a < n; ++a)
            x[a] = kTwoPi * static_cast<double>(ix[a]) / static_cast<double>(grid_n) + offset[a];
        double s = fy.sum_sq(x);
        compass(fy, x, s, opts.descent_iterations);
        lm_polish(fy, x, s, 30);
        double res = fy.max_abs(x);
        if (res > opts.tol && res <= 10.0 * opts.tol) {
            lm_polish(fy, x, s, 100);
            res = fy.max_abs(x);
        }
        if (res < best_res) best_res = res, best_x = x;
        if (best_res <= opts.tol) break;
    }

    Verdict v;
    v.residual = best_res;
    if (best_res <= opts.tol) {
        v.kind = VerdictKind::LikelyIn;
        const double period = kTwoPi * d;
        for (double& xa : best_x) {
            xa = std::fmod(xa * d, period);
            if (xa < 0) xa += period;
        }
        v.witness_x = std::move(best_x);
    } else {
        v.kind = VerdictKind::Unknown;
    }
    return v;
}

void Window::validate() const {
    for (double v : {y1_lo, y1_hi, y2_lo, y2_hi})
        if (!std::isfinite(v)) throw InputError("window bounds must be finite");
    if (!(y1_lo < y1_hi) || !(y2_lo < y2_hi)) throw InputError("window needs y1min < y1max and y2min < y2max");
}

double Raster::y1(std::size_t j) const { return window.y1_lo + (static_cast<double>(j) + 0.5) * cell_width(); }
double Raster::y2(std::size_t i) const { return window.y2_lo + (static_cast<double>(i) + 0.5) * cell_height(); }

std::size_t Raster::count(VerdictKind k) const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [k](const Verdict& v) { return v.kind == k; }));
}

namespace {

unsigned thread_count(unsigned requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("AMOEBA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs cell(i, j) over every cell, rows distributed over threads. Each cell
// writes only its own slot, so the result is independent of scheduling.
template <class CellFn>
void for_each_cell(Raster& r, unsigned threads, CellFn cell) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= r.rows) return;
            try {
                for (std::size_t j = 0; j < r.cols; ++j) r.at(i, j) = cell(i, j);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = r.rows;
                return;
            }
        }
    };
    const unsigned t = std::min<unsigned>(thread_count(threads), static_cast<unsigned>(std::max<std::size_t>(1, r.rows)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

Raster empty_raster(const ExpMapping& f, const Window& w, std::size_t rows, std::size_t cols, const RasterOptions& opts) {
    if (f.dim() != 2) throw UnsupportedDimension("amoeba rasters need n = 2, got n = " + std::to_string(f.dim()));
    w.validate();
    if (rows == 0 || cols == 0) throw InputError("raster resolution must be positive");
    if (!(opts.tol > 0.0) || opts.budget < 1) throw InputError("raster: tol and budget must be positive");
    Raster r;
    r.window = w;
    r.rows = rows;
    r.cols = cols;
    r.cells.resize(rows * cols);
    r.meta.mapping_hash = mapping_hash(f);
    r.meta.tol = opts.tol;
    r.meta.budget = opts.budget;
    r.meta.seed = opts.seed;
    r.meta.components = f.size();
    return r;
}

MembershipOptions cell_options(const Raster& r, const RasterOptions& opts, std::size_t i, std::size_t j) {
    MembershipOptions m;
    m.tol = opts.tol;
    m.budget = opts.budget;
    m.seed = cell_seed(opts.seed, i, j);
    m.half_width = {0.5 * r.cell_width(), 0.5 * r.cell_height()};
    return m;
}

}  // namespace

Raster raster(const ExpMapping& f, const std::optional<Character>& chi, const Window& w, std::size_t rows,
              std::size_t cols, const RasterOptions& opts) {
    Raster r = empty_raster(f, w, rows, cols, opts);
    const ExpMapping g = chi ? perturb(f, *chi) : f;
    if (chi) r.meta.phases.push_back(chi->phases);
    for_each_cell(r, opts.threads, [&](std::size_t i, std::size_t j) {
        return membership(g, {r.y1(j), r.y2(i)}, cell_options(r, opts, i, j));
    });
    return r;
}

Raster y_amoeba_raster(const ExpMapping& f, const Window& w, std::size_t rows, std::size_t cols,
                       std::size_t num_chars, const RasterOptions& opts) {
    if (num_chars == 0) throw InputError("Y-amoeba needs at least one character");
    Raster r = empty_raster(f, w, rows, cols, opts);
    const FreqLattice lat = lattice_of(f);
    std::vector<ExpMapping> perturbed{f};
    r.meta.phases.push_back(Character::identity(lat).phases);
    for (std::size_t c = 1; c < num_chars; ++c) {
        const Character chi = random_character(lat, splitmix64(opts.seed + c));
        r.meta.phases.push_back(chi.phases);
        perturbed.push_back(perturb(f, chi));
    }
    for_each_cell(r, opts.threads, [&](std::size_t i, std::size_t j) {
        const MembershipOptions mo = cell_options(r, opts, i, j);
        const RVector y{r.y1(j), r.y2(i)};
        Verdict v = membership(perturbed[0], y, mo);
        // Certificates depend only on coefficient moduli, so CertifiedOut
        // holds for every character at once.
        for (std::size_t c = 1; c < perturbed.size() && v.kind == VerdictKind::Unknown; ++c) {
            Verdict u = membership(perturbed[c], y, mo);
            if (u.kind == VerdictKind::LikelyIn) v = std::move(u);
            else v.residual = std::min(v.residual, u.residual);
        }
        return v;
    });
    return r;
}

ExpMapping map_spectra(const ExpMapping& f, const IntMatrix& m) {
    const std::size_t n = f.dim();
    if (m.size() != n || std::any_of(m.begin(), m.end(), [n](const auto& row) { return row.size() != n; }))
        throw InputError("map_spectra: matrix must be n x n");
    std::vector<FreqVector> rows;
    for (const auto& row : m) rows.emplace_back(row.begin(), row.end());
    if (rational_rank(rows) != n) throw InputError("map_spectra: matrix is singular");
    std::vector<ExpSum> comps;
    for (const auto& c : f.components()) {
        std::vector<Term> terms;
        for (const auto& t : c.terms()) {
            FreqVector nu(n, Rational(0));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) nu[a] += Rational(m[a][b]) * t.freq[b];
            terms.push_back(Term{t.coeff, std::move(nu)});
        }
        comps.emplace_back(n, std::move(terms));
    }
    return ExpMapping(n, std::move(comps));
}

std::uint64_t mapping_hash(const ExpMapping& f) {
    std::string s = std::to_string(f.dim());
    for (const auto& c : f.components()) {
        s += "|";
        for (const auto& t : c.terms()) s += fmt17(t.coeff.real()) + "," + fmt17(t.coeff.imag()) + to_string(t.freq) + ";";
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_csv(std::ostream& os, const Raster& r) {
    os << "y1,y2,verdict,residual\n";
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = 0; j < r.cols; ++j) {
            const Verdict& v = r.at(i, j);
            os << fmt17(r.y1(j)) << ',' << fmt17(r.y2(i)) << ',' << verdict_name(v.kind) << ',' << fmt17(v.residual)
               << '\n';
        }
}

Raster read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("raster CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "y1,y2,verdict,residual") throw InputError("raster CSV: unexpected header \"" + line + "\"");

    struct Rec {
        std::string y1, y2;
        Verdict v;
    };
    std::vector<Rec> recs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        const std::string where = "raster CSV line " + std::to_string(lineno);
        if (fields.size() != 4) throw InputError(where + ": expected 4 fields");
        Rec rec{fields[0], fields[1], {}};
        if (fields[2] == "out") rec.v.kind = VerdictKind::CertifiedOut;
        else if (fields[2] == "in") rec.v.kind = VerdictKind::LikelyIn;
        else if (fields[2] == "unknown") rec.v.kind = VerdictKind::Unknown;
        else throw InputError(where + ": unknown verdict \"" + fields[2] + "\"");
        try {
            std::size_t used = 0;
            rec.v.residual = std::stod(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument("trailing");
            for (const auto& s : {fields[0], fields[1]}) {
                const double v = std::stod(s, &used);
                if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("coordinate");
            }
        } catch (const std::logic_error&) {
            throw InputError(where + ": malformed number");
        }
        recs.push_back(std::move(rec));
    }
    if (recs.empty()) throw InputError("raster CSV has no cells");

    std::map<double, std::size_t> xs, ys;
    for (const auto& rec : recs) xs[std::stod(rec.y1)], ys[std::stod(rec.y2)];
    std::size_t k = 0;
    for (auto& [v, idx] : xs) idx = k++;
    k = 0;
    for (auto& [v, idx] : ys) idx = k++;

    Raster r;
    r.cols = xs.size();
    r.rows = ys.size();
    if (recs.size() != r.rows * r.cols) throw InputError("raster CSV is not a full grid");
    auto extent = [](const std::map<double, std::size_t>& m, double& lo, double& hi) {
        const double a = m.begin()->first, b = m.rbegin()->first;
        const double w = m.size() > 1 ? (b - a) / static_cast<double>(m.size() - 1) : 1.0;
        lo = a - 0.5 * w;
        hi = b + 0.5 * w;
    };
    extent(xs, r.window.y1_lo, r.window.y1_hi);
    extent(ys, r.window.y2_lo, r.window.y2_hi);
    r.cells.assign(r.rows * r.cols, Verdict{});
    std::vector<bool> seen(r.cells.size(), false);
    for (auto& rec : recs) {
        const std::size_t i = ys[std::stod(rec.y2)], j = xs[std::stod(rec.y1)];
        if (seen[i * r.cols + j]) throw InputError("raster CSV has a duplicate cell");
        seen[i * r.cols + j] = true;
        r.at(i, j) = std::move(rec.v);
    }
    return r;
}

std::string to_svg(const Raster& r) {
    const double cell = std::max(1.0, 600.0 / static_cast<double>(std::max(r.rows, r.cols)));
    const double margin = 56.0;
    const double w = cell * static_cast<double>(r.cols), h = cell * static_cast<double>(r.rows);
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w + 2 * margin) << "\" height=\""
       << num(h + 2 * margin) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<defs><pattern id=\"hatch\" width=\"4\" height=\"4\" patternUnits=\"userSpaceOnUse\">"
          "<path d=\"M0,4 L4,0\" stroke=\"#c0504d\" stroke-width=\"1\"/></pattern></defs>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Horizontal runs of equal verdict, row 0 at the bottom.
    for (std::size_t i = 0; i < r.rows; ++i) {
        const double top = margin + cell * static_cast<double>(r.rows - 1 - i);
        for (std::size_t j = 0; j < r.cols;) {
            const VerdictKind k = r.at(i, j).kind;
            std::size_t e = j;
            while (e < r.cols && r.at(i, e).kind == k) ++e;
            if (k != VerdictKind::CertifiedOut) {
                os << "<rect x=\"" << num(margin + cell * static_cast<double>(j)) << "\" y=\"" << num(top)
                   << "\" width=\"" << num(cell * static_cast<double>(e - j)) << "\" height=\"" << num(cell)
                   << "\" fill=\"" << (k == VerdictKind::LikelyIn ? "#1f4e79" : "url(#hatch)") << "\"/>\n";
            }
            j = e;
        }
    }
    os << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\"" << num(w) << "\" height=\""
       << num(h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double base = margin + h;
    os << "<text x=\"" << num(margin) << "\" y=\"" << num(base + 16) << "\" text-anchor=\"middle\">"
       << num(r.window.y1_lo) << "</text>\n";
    os << "<text x=\"" << num(margin + w) << "\" y=\"" << num(base + 16) << "\" text-anchor=\"middle\">"
       << num(r.window.y1_hi) << "</text>\n";
    os << "<text x=\"" << num(margin + w / 2) << "\" y=\"" << num(base + 36) << "\" text-anchor=\"middle\">y1</text>\n";
    os << "<text x=\"" << num(margin - 6) << "\" y=\"" << num(base + 4) << "\" text-anchor=\"end\">"
       << num(r.window.y2_lo) << "</text>\n";
    os << "<text x=\"" << num(margin - 6) << "\" y=\"" << num(margin + 4) << "\" text-anchor=\"end\">"
       << num(r.window.y2_hi) << "</text>\n";
    os << "<text x=\"" << num(margin - 36) << "\" y=\"" << num(margin + h / 2) << "\" text-anchor=\"middle\">y2</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace expamoeba
