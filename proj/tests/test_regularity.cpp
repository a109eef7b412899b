#include <doctest.h>

#include <cmath>
#include <numbers>

#include "expamoeba/characters.hpp"
#include "expamoeba/errors.hpp"
#include "expamoeba/json_io.hpp"
#include "expamoeba/lattice.hpp"
#include "expamoeba/regularity.hpp"
#include "test_support.hpp"

using namespace testing;

namespace {

const double pi = std::numbers::pi;

std::multiset<std::string> coefficient_set(const ExpSum& f) {
    std::multiset<std::string> out;
    for (const auto& t : f.terms()) out.insert(std::to_string(t.coeff.real()) + "," + std::to_string(t.coeff.imag()));
    return out;
}

std::set<FreqVector> freqs(const ExpSum& f) {
    std::set<FreqVector> out;
    for (const auto& t : f.terms()) out.insert(t.freq);
    return out;
}

// Oracle for K: direct evaluation of the traces and of the support value of
// each trace spectrum at Im z.
double k_oracle(const ExpMapping& tr, const CVector& z) {
    double k = 0.0;
    for (const auto& c : tr.components()) {
        double h = -INFINITY;
        for (const auto& t : c.terms()) {
            double s = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) s += z[i].imag() * t.freq[i].get_d();
            h = std::max(h, s);
        }
        if (!c.terms().empty()) k += std::exp(h) * std::abs(evaluate(c, z));
    }
    return k;
}

FreqVector random_direction(std::mt19937_64& g, std::size_t n) {
    FreqVector u;
    while (true) {
        u.clear();
        bool nonzero = false;
        for (std::size_t k = 0; k < n; ++k) {
            u.push_back(Rational(unif_int(g, -2, 2)));
            nonzero = nonzero || u.back() != 0;
        }
        if (nonzero) return u;
    }
}

}  // namespace

TEST_CASE("delta trace of the two-square mapping at its top edge") {
    const ExpMapping f = bundled_fixture("F_sec61");
    const ExpMapping tr = delta_trace(f, fv({"0", "1"}));
    REQUIRE(tr.size() == 2);
    const std::set<FreqVector> edge{fv({"0", "1"}), fv({"1", "1"})};
    CHECK(freqs(tr[0]) == edge);
    CHECK(freqs(tr[1]) == edge);
    CHECK(coefficient_set(tr[0]) == std::multiset<std::string>{"1.000000,0.000000", "1.000000,0.000000"});
    CHECK(coefficient_set(tr[1]) == std::multiset<std::string>{"-1.000000,0.000000", "-1.000000,0.000000"});
}

TEST_CASE("delta trace at u = 0 is the mapping itself") {
    for (const auto& [name, f] : bundled_fixtures()) {
        CAPTURE(name);
        CHECK(delta_trace(f, zero_freq(f.dim())) == f);
    }
}

TEST_CASE("delta trace at vertices of G is monomial") {
    const ExpMapping g = bundled_fixture("G_eq36");
    const ExpMapping tr = delta_trace(g, fv({"1", "-1"}));
    REQUIRE(tr[0].terms().size() == 1);
    REQUIRE(tr[1].terms().size() == 1);
    CHECK(tr[0].terms()[0].coeff == Complex(2.0));
    CHECK(tr[0].terms()[0].freq == fv({"1", "0"}));
    CHECK(tr[1].terms()[0].coeff == Complex(-1.0));
    CHECK(tr[1].terms()[0].freq == fv({"0", "0"}));
}

TEST_CASE("trace spectra lie in the exposed face") {
    std::mt19937_64 g(11);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = static_cast<std::size_t>(unif_int(g, 1, 3));
        const ExpMapping f = random_mapping(g, n, static_cast<std::size_t>(unif_int(g, 1, 3)), 6);
        const FreqVector u = random_direction(g, n);
        const ExpMapping tr = delta_trace(f, u);
        for (std::size_t l = 0; l < f.size(); ++l) {
            const Face face = face_of(newton_polytope(f[l]), u);
            CHECK_FALSE(tr[l].is_zero());
            for (const auto& t : tr[l].terms()) {
                // In the hull of the face: adding it leaves the vertex set unchanged.
                std::vector<FreqVector> pts = face.vertices;
                pts.push_back(t.freq);
                CHECK(Polytope(n, pts).vertices() == face.vertices);
            }
            // Every spectrum point on the face is kept.
            for (const auto& t : f[l].terms()) {
                std::vector<FreqVector> pts = face.vertices;
                pts.push_back(t.freq);
                if (Polytope(n, pts).vertices() == face.vertices) CHECK(freqs(tr[l]).count(t.freq) == 1);
            }
        }
    }
}

TEST_CASE("closed spectra on the bundled mappings") {
    CHECK_FALSE(closed_spectra(bundled_fixture("F_sec61")).closed);
    CHECK_FALSE(closed_spectra(bundled_fixture("pair_rem64")).closed);
    CHECK(closed_spectra(bundled_fixture("line")).closed);

    const ClosedSpectraResult g = closed_spectra(bundled_fixture("G_eq36"));
    CHECK(g.closed);
    CHECK_FALSE(g.witness.has_value());

    // H's Newton polytopes sum to the box [0,3]^2 x [0,1]; the facet
    // exposed by (-1,0,0) has three segment summands and dimension 2 < 3.
    const ClosedSpectraResult h = closed_spectra(bundled_fixture("H_sec61"));
    CHECK_FALSE(h.closed);
    REQUIRE(h.witness.has_value());
    CHECK(h.witness->face.dim == 2);
    CHECK_FALSE(h.witness->has_point_summand());
    for (const auto& s : h.witness->summands) CHECK(s.dim == 1);
}

TEST_CASE("witness face violates the condition") {
    const ClosedSpectraResult r = closed_spectra(bundled_fixture("F_sec61"));
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->face.dim < 2);
    CHECK_FALSE(r.witness->has_point_summand());
}

TEST_CASE("dimension of the zero-set image") {
    CHECK(z_dim(bundled_fixture("pair_rem64")) == 1);
    CHECK(z_dim(bundled_fixture("F_sec61")) == 1);
    // G's summands are the unit segments along the two axes; the whole square
    // is the only face without a point summand, so the zero set image is a point.
    CHECK(z_dim(bundled_fixture("G_eq36")) == 0);
    CHECK(z_dim(bundled_fixture("H_sec61")) == 1);
    // A single point-free polytope: every vertex is a point summand of itself.
    const ExpMapping mono(2, {es(2, {{1.0, {"1", "2"}}})});
    CHECK_FALSE(z_dim(mono).has_value());
    CHECK_FALSE(z_dim_dual_cones(mono).has_value());
}

TEST_CASE("two routes to the dimension agree and match closed spectra") {
    std::mt19937_64 g(2024);
    for (const auto& [name, f] : bundled_fixtures()) {
        CAPTURE(name);
        CHECK(z_dim(f) == z_dim_dual_cones(f));
    }
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = static_cast<std::size_t>(unif_int(g, 1, 3));
        const std::size_t m = static_cast<std::size_t>(unif_int(g, 1, 3));
        const ExpMapping f = random_mapping(g, n, m, 5);
        const auto zd = z_dim(f);
        CHECK(zd == z_dim_dual_cones(f));
        const bool by_dim = !zd || *zd <= static_cast<int>(n) - static_cast<int>(m);
        CHECK(closed_spectra(f).closed == by_dim);
    }
}

TEST_CASE("K functional examples") {
    const ExpMapping g = bundled_fixture("G_eq36");
    std::mt19937_64 r(5);
    for (int t = 0; t < 20; ++t) CHECK(k_functional(g, fv({"-1", "-1"}), random_point(r, 2)) == doctest::Approx(4.0));

    const ExpMapping f = bundled_fixture("F_sec61");
    CHECK(k_functional(f, fv({"0", "1"}), CVector{Complex(pi), Complex(0.0)}) <= 1e-12);
    CHECK(k_functional(f, fv({"0", "1"}), CVector{Complex(0.0), Complex(0.0)}) == doctest::Approx(4.0));
}

TEST_CASE("K functional matches a direct oracle and vanishes only at common trace zeros") {
    std::mt19937_64 g(17);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = static_cast<std::size_t>(unif_int(g, 1, 3));
        const ExpMapping f = random_mapping(g, n, static_cast<std::size_t>(unif_int(g, 1, 3)), 5);
        const FreqVector u = random_direction(g, n);
        const CVector z = random_point(g, n);
        const double k = k_functional(f, u, z);
        CHECK(k >= 0.0);
        CHECK(k == doctest::Approx(k_oracle(delta_trace(f, u), z)).epsilon(1e-12));
    }
    // A common zero of both traces of F on its top edge.
    const ExpMapping f = bundled_fixture("F_sec61");
    const ExpMapping tr = delta_trace(f, fv({"0", "1"}));
    for (double y2 : {-1.0, 0.0, 0.7}) {
        const CVector z{Complex(pi, 0.0), Complex(0.3, y2)};
        CHECK(std::abs(evaluate(tr[0], z)) < 1e-10);
        CHECK(std::abs(evaluate(tr[1], z)) < 1e-10);
        CHECK(k_functional(f, fv({"0", "1"}), z) < 1e-10);
    }
    // Away from x1 = pi the edge traces do not vanish.
    CHECK(k_functional(f, fv({"0", "1"}), CVector{Complex(1.0), Complex(0.0)}) > 1e-3);
}

TEST_CASE("translation characters shift the argument of K") {
    std::mt19937_64 g(23);
    for (int rep = 0; rep < 40; ++rep) {
        const ExpMapping f = random_mapping(g, 2, 2, 5);
        const FreqVector u = random_direction(g, 2);
        const RVector t{unif(g, -3, 3), unif(g, -3, 3)};
        const ExpMapping fc = perturb(f, translation_character(t, lattice_of(f)));
        const CVector z = random_point(g, 2);
        CVector zt = z;
        for (std::size_t k = 0; k < 2; ++k) zt[k] += t[k];
        CHECK(k_functional(fc, u, z) == doctest::Approx(k_functional(f, u, zt)).epsilon(1e-10));
    }
}

TEST_CASE("infimum estimates") {
    const ExpMapping g = bundled_fixture("G_eq36");
    for (std::size_t s : {1u, 10u, 500u}) CHECK(estimate_inf_K(g, fv({"-1", "-1"}), s, 3) == doctest::Approx(4.0));

    CHECK(estimate_inf_K(bundled_fixture("F_sec61"), fv({"0", "1"}), 10000, 1) <= 1e-2);

    const ExpMapping pair = bundled_fixture("pair_rem64");
    for (const auto& d : face_decompositions(pair)) {
        if (d.face.dim >= 2) continue;
        CAPTURE(to_string(d.face.normal));
        CHECK(estimate_inf_K(pair, d.face.normal, 10000, 1) >= 0.1);
    }
}

TEST_CASE("infimum estimate is nonincreasing along a seed prefix") {
    std::mt19937_64 g(31);
    for (int rep = 0; rep < 6; ++rep) {
        const ExpMapping f = random_mapping(g, 2, 2, 4);
        const FreqVector u = random_direction(g, 2);
        double prev = INFINITY;
        for (std::size_t s : {8u, 32u, 128u, 512u}) {
            const double v = estimate_inf_K(f, u, s, 9);
            CHECK(v <= prev);
            CHECK(v >= 0.0);
            prev = v;
        }
    }
}

TEST_CASE("infimum estimate is deterministic") {
    const ExpMapping f = bundled_fixture("pair_rem64");
    CHECK(estimate_inf_K(f, fv({"1", "1"}), 300, 4) == estimate_inf_K(f, fv({"1", "1"}), 300, 4));
}

TEST_CASE("analyze reports") {
    SUBCASE("G") {
        const RegularityReport r = analyze(bundled_fixture("G_eq36"));
        CHECK(r.m == 2);
        CHECK(r.n == 2);
        CHECK(r.closed_spectra);
        CHECK(r.z_dim == 0);
        CHECK(r.ronkin_ok);
        for (const auto& k : r.k_estimates) {
            CHECK(k.face.face.dim < 2);
            CHECK(k.inf_k > 0.0);
        }
    }
    SUBCASE("F") {
        const RegularityReport r = analyze(bundled_fixture("F_sec61"));
        CHECK_FALSE(r.closed_spectra);
        CHECK(r.z_dim == 1);
        CHECK_FALSE(r.ronkin_ok);
        bool zero_found = false;
        for (const auto& k : r.k_estimates) zero_found = zero_found || k.inf_k < 1e-6;
        CHECK(zero_found);
    }
    SUBCASE("pair") {
        const RegularityReport r = analyze(bundled_fixture("pair_rem64"), {10000, 1});
        CHECK_FALSE(r.closed_spectra);
        CHECK(r.z_dim == 1);
        CHECK_FALSE(r.ronkin_ok);
        REQUIRE_FALSE(r.k_estimates.empty());
        for (const auto& k : r.k_estimates) {
            CHECK(k.inf_k >= 0.1);
            CHECK(k.samples == 10000);
            CHECK(k.zero_trace_components.empty());
        }
    }
    SUBCASE("faces are complete") {
        const RegularityReport r = analyze(bundled_fixture("H_sec61"));
        CHECK(r.faces.size() == 27);  // 8 + 12 + 6 + the box itself
        CHECK(r.k_estimates.size() == 26);
    }
}

TEST_CASE("analyze rejects unsupported inputs") {
    const ExpMapping four(4, {ExpSum(4, {Term{Complex(1.0), fv({"1", "0", "0", "0"})}, Term{Complex(1.0), fv({"0", "0", "0", "0"})}})});
    CHECK_THROWS_AS(analyze(four), UnsupportedDimension);
    const ExpMapping with_zero(2, {es(2, {{1.0, {"1", "0"}}}), ExpSum(2, {})});
    CHECK_THROWS_AS(analyze(with_zero), InputError);
}
