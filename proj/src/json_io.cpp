#include "expamoeba/json_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "expamoeba/errors.hpp"

namespace expamoeba {

namespace {

void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw InputError(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw InputError(where + ": unknown key \"" + key + "\"");
}

const Json& required(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(where + ": missing key \"" + key + "\"");
    return *it;
}

double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw InputError(where + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(where + " must be finite");
    return d;
}

Json freq_json(const FreqVector& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') ++line, col = 1;
        else ++col;
    }
    return {line, col};
}

}  // namespace

Json to_json(const ExpMapping& f) {
    Json comps = Json::array();
    for (const auto& c : f.components()) {
        Json terms = Json::array();
        for (const auto& t : c.terms())
            terms.push_back(Json{{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"freq", freq_json(t.freq)}});
        comps.push_back(Json{{"terms", std::move(terms)}});
    }
    return Json{{"n", f.dim()}, {"components", std::move(comps)}};
}

ExpMapping mapping_from_json(const Json& j) {
    only_keys(j, {"n", "components"}, "mapping");
    const Json& nj = required(j, "n", "mapping");
    if (!nj.is_number_integer() || nj.get<long long>() < 1) throw InputError("mapping: \"n\" must be a positive integer");
    const std::size_t n = nj.get<std::size_t>();
    const Json& cj = required(j, "components", "mapping");
    if (!cj.is_array() || cj.empty()) throw InputError("mapping: \"components\" must be a nonempty array");
    std::vector<ExpSum> comps;
    for (std::size_t l = 0; l < cj.size(); ++l) {
        const std::string where = "component " + std::to_string(l + 1);
        only_keys(cj[l], {"terms"}, where);
        const Json& tj = required(cj[l], "terms", where);
        if (!tj.is_array()) throw InputError(where + ": \"terms\" must be an array");
        std::vector<Term> terms;
        for (std::size_t t = 0; t < tj.size(); ++t) {
            const std::string tw = where + " term " + std::to_string(t + 1);
            only_keys(tj[t], {"re", "im", "freq"}, tw);
            const double re = number(required(tj[t], "re", tw), tw + " \"re\"");
            const double im = tj[t].contains("im") ? number(tj[t]["im"], tw + " \"im\"") : 0.0;
            const Json& fj = required(tj[t], "freq", tw);
            if (!fj.is_array() || fj.size() != n)
                throw InputError(tw + ": \"freq\" must be an array of " + std::to_string(n) + " rationals");
            FreqVector freq;
            for (const auto& q : fj) {
                if (q.is_string()) freq.push_back(parse_rational(q.get<std::string>()));
                else if (q.is_number_integer()) freq.push_back(Rational(q.get<long>()));
                else throw InputError(tw + ": frequencies must be \"p/q\" strings or integers");
            }
            terms.push_back(Term{Complex(re, im), std::move(freq)});
        }
        comps.emplace_back(n, std::move(terms));
    }
    return ExpMapping(n, std::move(comps));
}

ExpMapping parse_mapping(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw InputError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
    return mapping_from_json(j);
}

ExpMapping read_mapping_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_mapping(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

Json to_json(const Face& f) {
    Json verts = Json::array();
    for (const auto& v : f.vertices) verts.push_back(freq_json(v));
    Json normal = Json::array();
    for (const auto& q : f.normal) normal.push_back(q.get_num().get_si());
    return Json{{"dim", f.dim}, {"vertices", std::move(verts)}, {"normal", std::move(normal)}};
}

Json to_json(const FaceDecomposition& d) {
    Json j = to_json(d.face);
    Json s = Json::array();
    for (const auto& f : d.summands) s.push_back(to_json(f));
    j["summands"] = std::move(s);
    j["has_point_summand"] = d.has_point_summand();
    return j;
}

Json to_json(const RegularityReport& r) {
    Json j{{"m", r.m}, {"n", r.n}, {"closed_spectra", r.closed_spectra}};
    j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    j["z_dim"] = r.z_dim ? Json(*r.z_dim) : Json("Empty");
    j["ronkin_ok"] = r.ronkin_ok;
    Json ks = Json::array();
    for (const auto& k : r.k_estimates) {
        Json e{{"face", to_json(k.face)}, {"inf_k", k.inf_k}, {"samples", k.samples}};
        e["zero_trace_components"] = k.zero_trace_components;
        ks.push_back(std::move(e));
    }
    j["k_estimates"] = std::move(ks);
    Json fs = Json::array();
    for (const auto& f : r.faces) fs.push_back(to_json(f));
    j["faces"] = std::move(fs);
    return j;
}

Json to_json(const std::vector<ComponentReport>& comps) {
    Json a = Json::array();
    for (const auto& c : comps)
        a.push_back(Json{{"id", c.id},
                         {"cells", c.cells},
                         {"hull_cells", c.hull_cells},
                         {"convexity_defect", c.convexity_defect},
                         {"touches_rim", c.touches_rim}});
    return Json{{"components", std::move(a)}};
}

namespace {

ExpSum sum2(std::initializer_list<std::pair<double, std::pair<long, long>>> terms) {
    std::vector<Term> t;
    for (const auto& [a, k] : terms) t.push_back(Term{Complex(a), {Rational(k.first), Rational(k.second)}});
    return ExpSum(2, std::move(t));
}

ExpSum sum3(std::initializer_list<std::pair<double, std::array<long, 3>>> terms) {
    std::vector<Term> t;
    for (const auto& [a, k] : terms) t.push_back(Term{Complex(a), {Rational(k[0]), Rational(k[1]), Rational(k[2])}});
    return ExpSum(3, std::move(t));
}

}  // namespace

std::vector<std::pair<std::string, ExpMapping>> bundled_fixtures() {
    // Two squares sharing the edge {(0,1),(1,1)}.
    ExpMapping f(2, {sum2({{1, {1, 0}}, {1, {0, 1}}, {1, {1, 1}}, {2, {0, 0}}}),
                     sum2({{3, {1, 0}}, {-1, {0, 1}}, {-1, {1, 1}}, {4, {0, 0}}})});
    ExpMapping g(2, {sum2({{2, {1, 0}}, {3, {0, 0}}}), sum2({{1, {0, 1}}, {-1, {0, 0}}})});
    // h2 = h1 * (3x - y - xy + 4) expanded, x = e^{iz1}, y = e^{iz2}.
    ExpMapping h(3, {sum3({{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {1, 1, 0}}, {2, {0, 0, 0}}}),
                     sum3({{3, {2, 0, 0}},
                           {2, {2, 1, 0}},
                           {-1, {0, 2, 0}},
                           {-2, {1, 2, 0}},
                           {-1, {2, 2, 0}},
                           {4, {1, 1, 0}},
                           {10, {1, 0, 0}},
                           {2, {0, 1, 0}},
                           {8, {0, 0, 0}}}),
                     sum3({{1, {0, 0, 1}}, {-1, {0, 0, 0}}})});
    ExpMapping pair(2, {sum2({{1, {1, 0}}, {2, {0, 1}}, {1, {0, 0}}}), sum2({{1, {1, 0}}, {3, {0, 1}}, {-1, {0, 0}}})});
    ExpMapping line(2, {sum2({{1, {1, 0}}, {1, {0, 1}}, {1, {0, 0}}})});
    return {{"F_sec61", f}, {"G_eq36", g}, {"H_sec61", h}, {"pair_rem64", pair}, {"line", line}};
}

ExpMapping bundled_fixture(const std::string& name) {
    for (auto& [key, f] : bundled_fixtures())
        if (key == name) return f;
    throw InputError("no bundled fixture named \"" + name + "\"");
}

}  // namespace expamoeba
