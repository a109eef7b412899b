// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "expamoeba/amoeba.hpp"
#include "expamoeba/bochner_fejer.hpp"
#include "expamoeba/characters.hpp"
#include "expamoeba/cli.hpp"
#include "expamoeba/convexity.hpp"
#include "expamoeba/json_io.hpp"
#include "expamoeba/lattice.hpp"
#include "expamoeba/regularity.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace testing;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [FAILED]");
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

// Runs one criterion, checks its runtime budget (seconds, <= 0 for none) and
// prints its line.
void criterion(int id, const std::string& name, double budget, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = seconds_since(t0);
    if (budget > 0) o.require(dt < budget, "runtime " + fmt("%.2f", dt) + " s < " + fmt("%g", budget) + " s");
    else o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime ") + fmt("%.2f", dt) + " s";
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

bool interior(const Raster& r, std::size_t i, std::size_t j) {
    for (long di = -1; di <= 1; ++di)
        for (long dj = -1; dj <= 1; ++dj) {
            const long a = static_cast<long>(i) + di, b = static_cast<long>(j) + dj;
            if (a < 0 || b < 0 || a >= static_cast<long>(r.rows) || b >= static_cast<long>(r.cols)) continue;
            if (r.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)).kind != r.at(i, j).kind) return false;
        }
    return true;
}

struct Centroid {
    double y1 = 0, y2 = 0;
};

std::vector<Centroid> centroids(const Raster& r, std::size_t count) {
    const std::vector<int> labels = component_labels(r);
    std::vector<Centroid> c(count);
    std::vector<std::size_t> n(count, 0);
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = 0; j < r.cols; ++j) {
            const int l = labels[i * r.cols + j];
            if (l < 0) continue;
            c[static_cast<std::size_t>(l)].y1 += r.y1(j);
            c[static_cast<std::size_t>(l)].y2 += r.y2(i);
            ++n[static_cast<std::size_t>(l)];
        }
    for (std::size_t k = 0; k < count; ++k)
        if (n[k]) c[k].y1 /= static_cast<double>(n[k]), c[k].y2 /= static_cast<double>(n[k]);
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"expamoeba"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return expamoeba::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

const Window line_window{-5, 5, -5, 5};
const Window g_window{-2, 2, -2, 2};

}  // namespace

int main() {
    const ExpMapping F = bundled_fixture("F_sec61");
    const ExpMapping G = bundled_fixture("G_eq36");
    const ExpMapping H = bundled_fixture("H_sec61");
    const ExpMapping pair = bundled_fixture("pair_rem64");
    const ExpMapping line = bundled_fixture("line");
    const FreqVector top_edge = fv({"0", "1"});

    criterion(1, "regularity verdicts", 1.0, [&](Outcome& o) {
        const RegularityReport rf = analyze(F);
        const double k = k_functional(F, top_edge, CVector{Complex(pi), Complex(0.0)});
        o.require(!rf.closed_spectra && k <= 1e-8, "F: closed_spectra=" + std::string(rf.closed_spectra ? "true" : "false") +
                                                       ", K(pi,0)=" + fmt("%.3g", k));
        const RegularityReport rp = analyze(pair);
        o.require(!rp.closed_spectra && rp.z_dim == 1,
                  "pair: closed_spectra=" + std::string(rp.closed_spectra ? "true" : "false") +
                      ", z_dim=" + (rp.z_dim ? std::to_string(*rp.z_dim) : "Empty"));
        const RegularityReport rh = analyze(H);
        std::string why;
        if (rh.witness)
            why = ", witness face dim " + std::to_string(rh.witness->face.dim) + " normal " +
                  to_string(rh.witness->face.normal) + " without point summand";
        o.require(rh.closed_spectra, "H: closed_spectra=" + std::string(rh.closed_spectra ? "true" : "false") + why);
        const RegularityReport rg = analyze(G);
        o.require(rg.closed_spectra, "G: closed_spectra=" + std::string(rg.closed_spectra ? "true" : "false"));
    });

    criterion(2, "closed spectra vs dimension cross-check", 10.0, [&](Outcome& o) {
        std::vector<ExpMapping> maps{F, G, H, pair};
        std::mt19937_64 g(20240601);
        while (maps.size() < 54) {
            const std::size_t n = static_cast<std::size_t>(unif_int(g, 1, 3));
            maps.push_back(random_mapping(g, n, static_cast<std::size_t>(unif_int(g, 1, 3)), 5));
        }
        std::size_t agree = 0, routes = 0;
        for (const auto& f : maps) {
            const auto zd = z_dim(f);
            const bool by_dim = !zd || *zd <= static_cast<int>(f.dim()) - static_cast<int>(f.size());
            agree += closed_spectra(f).closed == by_dim;
            routes += zd == z_dim_dual_cones(f);
        }
        o.require(agree == maps.size(), std::to_string(agree) + "/" + std::to_string(maps.size()) + " agree");
        o.require(routes == maps.size(),
                  std::to_string(routes) + "/" + std::to_string(maps.size()) + " face-lattice = dual-cone dimension");
    });

    criterion(3, "delta trace of F at the top edge", 0, [&](Outcome& o) {
        const ExpMapping tr = delta_trace(F, top_edge);
        const std::set<FreqVector> edge{fv({"0", "1"}), fv({"1", "1"})};
        auto check = [&](const ExpSum& c, double a) {
            if (c.terms().size() != 2) return false;
            for (const auto& t : c.terms())
                if (t.coeff != Complex(a) || !edge.count(t.freq)) return false;
            return true;
        };
        o.require(tr.size() == 2 && check(tr[0], 1.0), "f1 trace = e^{iz2} + e^{i(z1+z2)}");
        o.require(tr.size() == 2 && check(tr[1], -1.0), "f2 trace = -e^{iz2} - e^{i(z1+z2)}");
    });

    criterion(4, "perturbation semantics", 0, [&](Outcome& o) {
        const ExpMapping f(1, {es(1, {{1.0, {"1/3"}}})});
        const ExpMapping g = perturb(f, Character(lattice_of(f), {pi / 2}));
        o.require(g[0].terms().size() == 1 && g[0].terms()[0].coeff == Complex(0.0, 1.0) &&
                      g[0].terms()[0].freq == fv({"1/3"}),
                  "chi(gamma) = i gives i e^{i gamma z} exactly");
        std::mt19937_64 r(77);
        double worst = 0.0;
        const std::vector<ExpMapping> maps{F, G, H, pair, line};
        for (int k = 0; k < 1000; ++k) {
            const ExpMapping& m = maps[static_cast<std::size_t>(k) % maps.size()];
            const std::size_t n = m.dim();
            RVector t(n);
            for (auto& v : t) v = unif(r, -10, 10);
            const ExpMapping p = perturb(m, translation_character(t, lattice_of(m)));
            const CVector z = random_point(r, n);
            CVector zt = z;
            for (std::size_t a = 0; a < n; ++a) zt[a] += t[a];
            const CVector lhs = evaluate(p, z), rhs = evaluate(m, zt);
            for (std::size_t l = 0; l < lhs.size(); ++l)
                worst = std::max(worst, std::abs(lhs[l] - rhs[l]) / (1.0 + std::abs(rhs[l])));
        }
        o.require(worst <= 1e-12, "translation: max rel error " + fmt("%.2e", worst) + " over 1000 points");
    });

    criterion(5, "Bochner-Fejer approximation", 10.0, [&](Outcome& o) {
        const FejerBasis std_basis(lattice_basis({fv({"1", "0"}), fv({"0", "1"})}, 2));
        bool exact = true;
        for (int j = 2; j <= 5; ++j) {
            Integer fact;
            mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(j));
            Rational expect(fact - 1, fact);
            expect.canonicalize();
            for (const auto& e : std_basis.lattice.basis) exact = exact && multiplier(e, j, std_basis) == expect;
        }
        o.require(exact, "basis multipliers = 1 - 1/j! for j = 2..5");

        const FejerBasis b(lattice_of(F));
        const TubeWindow w = TubeWindow::box({0.0, 0.0}, {2 * pi, 2 * pi}, {-1.0, -1.0}, {1.0, 1.0}, 9);
        const SupOptions refine{true, 8};
        double prev = INFINITY, worst_eq = 0.0;
        bool monotone = true;
        for (int j = 1; j <= 5; ++j) {
            const ExpMapping q = fejer_approx(F, j, b);
            const double d = sup_distance(q, F, w, refine);
            monotone = monotone && d <= prev + 1e-12;
            prev = d;
            for (std::uint64_t s = 0; s < 10; ++s) {
                const Character chi = random_character(b.lattice, 1000 + s);
                worst_eq = std::max(worst_eq, std::abs(sup_distance(perturb(q, chi), perturb(F, chi), w, refine) - d));
            }
        }
        o.require(monotone, "sup distance nonincreasing in j = 1..5 (last " + fmt("%.3g", prev) + ")");
        o.require(worst_eq <= 1e-6, "perturbed sup distance equal within " + fmt("%.2e", worst_eq));
    });

    criterion(6, "amoeba point tests", 60.0, [&](Outcome& o) {
        const Raster r = raster(G, std::nullopt, g_window, 200, 200);
        const double p1 = -std::log(1.5), p2 = 0.0;
        // Cells whose closed box contains the point form the block.
        std::size_t in_block = 0, in_outside = 0, unknown_block = 0, nonout_outside = 0;
        for (std::size_t i = 0; i < r.rows; ++i)
            for (std::size_t j = 0; j < r.cols; ++j) {
                const bool block = std::abs(r.y1(j) - p1) <= 0.5 * r.cell_width() + 1e-12 &&
                                   std::abs(r.y2(i) - p2) <= 0.5 * r.cell_height() + 1e-12;
                const VerdictKind k = r.at(i, j).kind;
                if (block) {
                    in_block += k == VerdictKind::LikelyIn;
                    unknown_block += k == VerdictKind::Unknown;
                } else {
                    in_outside += k == VerdictKind::LikelyIn;
                    nonout_outside += k != VerdictKind::CertifiedOut;
                }
            }
        o.require(in_outside == 0 && nonout_outside == 0, "G: every cell outside the block certified out");
        o.require(in_block > 0, "G: " + std::to_string(in_block) + " in-cells and " + std::to_string(unknown_block) +
                                    " unknown cells in the block containing (-ln 1.5, 0)");
        const Verdict a = membership(line, {0.0, 0.0});
        o.require(a.kind == VerdictKind::LikelyIn && a.residual <= 1e-8,
                  "line (0,0) in, residual " + fmt("%.2e", a.residual));
        o.require(membership(line, {3.0, 3.0}).kind == VerdictKind::CertifiedOut, "line (3,3) certified out");
    });

    Raster line200;
    double line200_seconds = 0.0;
    criterion(7, "convex complement components of the line amoeba", 300.0, [&](Outcome& o) {
        const auto t0 = std::chrono::steady_clock::now();
        line200 = raster(line, std::nullopt, line_window, 200, 200);
        line200_seconds = seconds_since(t0);
        const Raster r400 = raster(line, std::nullopt, line_window, 400, 400);
        const auto c200 = complement_components(line200), c400 = complement_components(r400);
        double worst = 0.0;
        for (const auto& c : c200) worst = std::max(worst, c.convexity_defect);
        o.require(c200.size() == 3 && worst <= 0.02,
                  "200^2: " + std::to_string(c200.size()) + " components, max defect " + fmt("%.4f", worst));
        double worst400 = 0.0;
        for (const auto& c : c400) worst400 = std::max(worst400, c.convexity_defect);
        o.require(c400.size() == c200.size() && worst400 <= 0.02,
                  "400^2: " + std::to_string(c400.size()) + " components, max defect " + fmt("%.4f", worst400));
        if (c400.size() == c200.size()) {
            const auto a = centroids(line200, c200.size()), b = centroids(r400, c400.size());
            double growth = -INFINITY;
            for (std::size_t k = 0; k < a.size(); ++k) {
                std::size_t best = 0;
                double dist = INFINITY;
                for (std::size_t m = 0; m < b.size(); ++m) {
                    const double d = std::hypot(a[k].y1 - b[m].y1, a[k].y2 - b[m].y2);
                    if (d < dist) dist = d, best = m;
                }
                growth = std::max(growth, c400[best].convexity_defect - c200[k].convexity_defect);
            }
            o.require(growth <= 0.01, "matched defect growth " + fmt("%.4f", growth) + " <= 0.01");
        }
    });

    // Eight times the 60 s budget of criterion 6; the cost is also compared
    // with a single raster of the same mapping.
    criterion(8, "Y-amoeba equals the amoeba", 8.0 * 60.0, [&](Outcome& o) {
        const auto t0 = std::chrono::steady_clock::now();
        const Raster y = y_amoeba_raster(line, line_window, 200, 200, 8);
        const double dt = seconds_since(t0);
        o.require(dt < 8.0 * line200_seconds,
                  fmt("%.2f", dt) + " s < 8 x " + fmt("%.2f", line200_seconds) + " s for one raster");
        const Raster& r = line200;
        std::size_t differ = 0, differ_interior = 0;
        for (std::size_t i = 0; i < r.rows; ++i)
            for (std::size_t j = 0; j < r.cols; ++j)
                if (y.at(i, j).kind != r.at(i, j).kind) {
                    ++differ;
                    differ_interior += interior(r, i, j) && interior(y, i, j);
                }
        const double frac = static_cast<double>(differ) / static_cast<double>(r.cells.size());
        o.require(frac <= 0.02, fmt("%.4f", 100.0 * frac) + "% of cells differ");
        o.require(differ_interior == 0, std::to_string(differ_interior) + " differing cells away from verdict boundaries");
    });

    criterion(9, "transport under M = [[1,1],[0,1]]", 0, [&](Outcome& o) {
        const ExpMapping h = map_spectra(line, IntMatrix{{1, 1}, {0, 1}});
        const Raster rh = raster(h, std::nullopt, line_window, 200, 200);
        const Raster& rf = line200;
        std::size_t compared = 0, agree = 0;
        for (std::size_t i = 0; i < rh.rows; ++i)
            for (std::size_t j = 0; j < rh.cols; ++j) {
                // h(z) = line(M^T z): y is in the amoeba of h iff M^T y is in that of line.
                const double p1 = rh.y1(j), p2 = rh.y1(j) + rh.y2(i);
                if (p2 <= line_window.y2_lo || p2 >= line_window.y2_hi) continue;
                const auto fi = static_cast<std::size_t>((p2 - line_window.y2_lo) / rf.cell_height());
                const auto fj = static_cast<std::size_t>((p1 - line_window.y1_lo) / rf.cell_width());
                if (fi >= rf.rows || fj >= rf.cols || !interior(rh, i, j) || !interior(rf, fi, fj)) continue;
                ++compared;
                agree += rh.at(i, j).kind == rf.at(fi, fj).kind;
            }
        const double frac = compared ? static_cast<double>(agree) / static_cast<double>(compared) : 0.0;
        o.require(compared > 0 && frac >= 0.95,
                  fmt("%.2f", 100.0 * frac) + "% of " + std::to_string(compared) + " non-boundary cells agree");
    });

    criterion(10, "byte-identical artifacts", 0, [&](Outcome& o) {
        const fs::path dir = fs::temp_directory_path() / ("expamoeba_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        auto p = [&](const std::string& name) { return (dir / name).string(); };
        if (cli({"examples", "--out", p("fx")}) != 0) throw std::runtime_error("examples failed");
        {
            std::ofstream(p("fx/line_sheared.json"), std::ios::binary)
                << to_json(map_spectra(line, IntMatrix{{1, 1}, {0, 1}})).dump(2) << "\n";
        }
        auto fx = [&](const std::string& name) { return p("fx/" + name + ".json"); };
        // Each job writes into its run directory; every criterion's artifacts are covered.
        auto jobs = [&](const std::string& run) {
            std::vector<std::vector<std::string>> j;
            for (const std::string name : {"F_sec61", "G_eq36", "H_sec61", "pair_rem64", "line"})
                j.push_back({"analyze", fx(name), "--out", p(run + "/analyze_" + name + ".json")});
            j.push_back({"fejer", fx("F_sec61"), "--j", "5", "--grid", "9", "--report", p(run + "/fejer.json"), "--out",
                         p(run + "/fejer_q.json")});
            j.push_back({"perturb", fx("line"), "--char-seed", "5", "--out", p(run + "/perturbed.json")});
            j.push_back({"amoeba", fx("G_eq36"), "--window", "-2,2,-2,2", "--res", "200", "--out", p(run + "/G.csv"),
                         "--meta", p(run + "/G_meta.json")});
            for (const std::string res : {"200", "400"})
                j.push_back({"amoeba", fx("line"), "--res", res, "--out", p(run + "/line" + res + ".csv"), "--meta",
                             p(run + "/line" + res + "_meta.json")});
            j.push_back({"amoeba", fx("line"), "--res", "200", "--chars", "8", "--out", p(run + "/yline.csv")});
            j.push_back({"amoeba", fx("line_sheared"), "--res", "200", "--out", p(run + "/sheared.csv")});
            j.push_back({"convexity", p(run + "/line200.csv"), "--meta", p(run + "/line200_meta.json"), "--out",
                         p(run + "/components.json")});
            return j;
        };
        std::vector<std::string> artifacts;
        for (const std::string run : {"a", "b"}) {
            fs::create_directories(dir / run);
            // The second run is single-threaded: outputs must not depend on it.
            if (run == "b") ::setenv("AMOEBA_THREADS", "1", 1);
            for (const auto& job : jobs(run))
                if (cli(job) != 0) throw std::runtime_error("command failed: " + job[0] + " " + job[1]);
        }
        ::unsetenv("AMOEBA_THREADS");
        std::size_t same = 0, total = 0;
        for (const auto& e : fs::directory_iterator(dir / "a")) {
            ++total;
            same += slurp(e.path()) == slurp(dir / "b" / e.path().filename());
        }
        fs::remove_all(dir);
        o.require(total > 0 && same == total, std::to_string(same) + "/" + std::to_string(total) + " artifacts identical");
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
