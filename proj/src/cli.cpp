#include "expamoeba/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "expamoeba/bochner_fejer.hpp"
#include "expamoeba/errors.hpp"
#include "expamoeba/json_io.hpp"

namespace expamoeba {

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw InputError(flag + ": \"" + item + "\" is not a finite number");
        }
    }
    if (out.empty()) throw InputError(flag + ": expected a comma-separated list of numbers");
    return out;
}

std::pair<std::size_t, std::size_t> parse_res(const std::string& text) {
    auto one = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw InputError("--res: expected R or RxC with positive integers, got \"" + text + "\"");
        const unsigned long v = std::stoul(s);
        if (v == 0 || v > 20000) throw InputError("--res: resolution must be in 1..20000");
        return static_cast<std::size_t>(v);
    };
    const auto x = text.find('x');
    if (x == std::string::npos) return {one(text), one(text)};
    return {one(text.substr(0, x)), one(text.substr(x + 1))};
}

Window parse_window(const std::string& text) {
    const auto v = parse_doubles(text, "--window");
    if (v.size() != 4) throw InputError("--window: expected y1min,y1max,y2min,y2max");
    Window w{v[0], v[1], v[2], v[3]};
    w.validate();
    return w;
}

void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path() && !fs::exists(target.parent_path()))
        throw InputError("output directory " + target.parent_path().string() + " does not exist");
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw InputError("cannot write " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw InputError("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot move output into place at " + path + ": " + ec.message());
    }
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) out << content;
    else write_atomic(path, content);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json meta_json(const Raster& r) {
    Json phases = Json::array();
    for (const auto& p : r.meta.phases) phases.push_back(p);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.meta.mapping_hash));
    return Json{{"mapping_hash", hash},
                {"phases", std::move(phases)},
                {"tol", r.meta.tol},
                {"budget", r.meta.budget},
                {"seed", r.meta.seed},
                {"components", r.meta.components},
                {"window", {r.window.y1_lo, r.window.y1_hi, r.window.y2_lo, r.window.y2_hi}},
                {"rows", r.rows},
                {"cols", r.cols}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential sums with rational spectra: regularity criteria, amoebae, Fejer approximations."};
    app.require_subcommand(1);

    std::string input, out_path;

    auto* analyze_cmd = app.add_subcommand("analyze", "Newton-polytope regularity report for a mapping");
    std::size_t samples = 4096;
    std::uint64_t seed = 1;
    analyze_cmd->add_option("input", input, "Mapping JSON")->required();
    analyze_cmd->add_option("--samples", samples, "Samples per face for the K infimum estimate")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    analyze_cmd->add_option("--seed", seed, "Sampler seed")->capture_default_str();
    analyze_cmd->add_option("--out", out_path, "Report JSON (default: stdout)");

    auto* amoeba_cmd = app.add_subcommand("amoeba", "Rasterize the amoeba (or Y-amoeba) of a mapping with n = 2");
    std::string window_text = "-5,5,-5,5", res_text = "200", phases_text, svg_path, meta_path;
    double tol = 1e-6;
    int budget = 4096;
    std::uint64_t raster_seed = 0, char_seed = 0;
    std::size_t chars = 1;
    amoeba_cmd->add_option("input", input, "Mapping JSON")->required();
    amoeba_cmd->add_option("--window", window_text, "y1min,y1max,y2min,y2max")->capture_default_str();
    amoeba_cmd->add_option("--res", res_text, "R (square) or RxC (rows x cols)")->capture_default_str();
    amoeba_cmd->add_option("--tol", tol, "Residual tolerance for in-cells")->capture_default_str()->check(
        CLI::PositiveNumber);
    amoeba_cmd->add_option("--budget", budget, "Coarse torus grid points per membership query")->capture_default_str()->check(
        CLI::Range(1, 1 << 24));
    amoeba_cmd->add_option("--seed", raster_seed, "Seed for grid offsets and sampled characters")
        ->capture_default_str();
    auto* phases_opt = amoeba_cmd->add_option("--phases", phases_text, "Character phases t1,t2,... on the lattice basis");
    auto* char_seed_opt = amoeba_cmd->add_option("--char-seed", char_seed, "Perturb by a random character");
    auto* chars_opt = amoeba_cmd->add_option("--chars", chars, "Y-amoeba: union over this many characters")
                          ->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
    phases_opt->excludes(char_seed_opt);
    chars_opt->excludes(phases_opt)->excludes(char_seed_opt);
    amoeba_cmd->add_option("--out", out_path, "Raster CSV (default: stdout)");
    amoeba_cmd->add_option("--svg", svg_path, "Raster SVG");
    amoeba_cmd->add_option("--meta", meta_path, "Raster metadata JSON");

    auto* fejer_cmd = app.add_subcommand("fejer", "Bochner-Fejer approximation, multipliers, sup-distance table");
    int j_order = 1, grid = 7;
    std::string fejer_window, report_path;
    fejer_cmd->add_option("input", input, "Mapping JSON")->required();
    fejer_cmd->add_option("--j", j_order, "Approximation order")->required()->check(CLI::Range(1, kDefaultMaxFejerOrder));
    fejer_cmd->add_option("--window", fejer_window, "Tube y-box lo1,hi1,...,lon,hin (default [-1,1]^n)");
    fejer_cmd->add_option("--grid", grid, "Grid points per real axis of the tube window")->capture_default_str()->check(
        CLI::Range(2, 64));
    fejer_cmd->add_option("--out", out_path, "Approximation Q_j(F) as mapping JSON");
    fejer_cmd->add_option("--report", report_path, "Multipliers and sup-distance table JSON");

    auto* perturb_cmd = app.add_subcommand("perturb", "Multiply coefficients by a character of the frequency lattice");
    perturb_cmd->add_option("input", input, "Mapping JSON")->required();
    auto* p_phases = perturb_cmd->add_option("--phases", phases_text, "Phases t1,t2,... on the lattice basis");
    auto* p_seed = perturb_cmd->add_option("--char-seed", char_seed, "Random character seed");
    p_phases->excludes(p_seed);
    perturb_cmd->add_option("--out", out_path, "Perturbed mapping JSON (default: stdout)");

    auto* convexity_cmd = app.add_subcommand("convexity", "Components of the certified complement of a raster");
    convexity_cmd->add_option("input", input, "Raster CSV")->required();
    convexity_cmd->add_option("--out", out_path, "Components JSON (default: stdout)");
    convexity_cmd->add_option("--meta", meta_path, "Raster metadata JSON written by amoeba --meta");

    auto* examples_cmd = app.add_subcommand("examples", "Write the bundled worked mappings as JSON fixtures");
    std::string examples_dir = "fixtures";
    examples_cmd->add_option("--out", examples_dir, "Directory for the fixtures")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*analyze_cmd) {
            const ExpMapping f = read_mapping_file(input);
            const RegularityReport r = analyze(f, {samples, seed});
            emit(out_path, dump(to_json(r)), out);
        } else if (*amoeba_cmd) {
            const Window w = parse_window(window_text);
            const auto [rows, cols] = parse_res(res_text);
            std::vector<double> phases;
            if (*phases_opt) phases = parse_doubles(phases_text, "--phases");
            const ExpMapping f = read_mapping_file(input);
            const RasterOptions ro{tol, budget, raster_seed, 0};
            Raster r;
            if (*chars_opt) {
                r = y_amoeba_raster(f, w, rows, cols, chars, ro);
            } else {
                std::optional<Character> chi;
                if (*phases_opt) chi = Character(lattice_of(f), phases);
                else if (*char_seed_opt) chi = random_character(lattice_of(f), char_seed);
                r = raster(f, chi, w, rows, cols, ro);
            }
            std::ostringstream csv;
            write_csv(csv, r);
            emit(out_path, csv.str(), out);
            if (!svg_path.empty()) write_atomic(svg_path, to_svg(r));
            if (!meta_path.empty()) write_atomic(meta_path, dump(meta_json(r)));
        } else if (*fejer_cmd) {
            const ExpMapping f = read_mapping_file(input);
            const std::size_t n = f.dim();
            std::vector<double> box(2 * n);
            for (std::size_t k = 0; k < n; ++k) box[2 * k] = -1.0, box[2 * k + 1] = 1.0;
            if (!fejer_window.empty()) {
                box = parse_doubles(fejer_window, "--window");
                if (box.size() != 2 * n) throw InputError("--window: expected " + std::to_string(2 * n) + " numbers");
            }
            const FejerBasis basis(lattice_of(f));
            const double period = 2.0 * std::numbers::pi * clear_to_integer(f).scale.get_d();
            TubeWindow tw;
            for (std::size_t k = 0; k < n; ++k) {
                tw.y_lo.push_back(box[2 * k]);
                tw.y_hi.push_back(box[2 * k + 1]);
                tw.x_lo.push_back(0.0);
                tw.x_hi.push_back(period);
                tw.grid_x.push_back(grid);
                tw.grid_y.push_back(grid);
            }
            tw.validate();

            Json mult = Json::array();
            for (std::size_t l = 0; l < f.size(); ++l)
                for (const auto& t : f[l].terms()) {
                    Json mu = Json::array();
                    for (int j = 1; j <= j_order; ++j) mu.push_back(to_string(multiplier(t.freq, j, basis)));
                    Json freq = Json::array();
                    for (const auto& q : t.freq) freq.push_back(to_string(q));
                    mult.push_back(Json{{"component", l + 1}, {"freq", std::move(freq)}, {"mu", std::move(mu)}});
                }
            Json table = Json::array();
            for (int j = 1; j <= j_order; ++j)
                table.push_back(Json{{"j", j}, {"sup_distance", sup_distance(fejer_approx(f, j, basis), f, tw)}});
            Json lattice = Json::array();
            for (const auto& b : basis.lattice.basis) {
                Json v = Json::array();
                for (const auto& q : b) v.push_back(to_string(q));
                lattice.push_back(std::move(v));
            }
            const Json report{{"j", j_order},
                              {"lattice_basis", std::move(lattice)},
                              {"window", box},
                              {"grid", grid},
                              {"multipliers", std::move(mult)},
                              {"sup_distance", std::move(table)}};
            const ExpMapping q = fejer_approx(f, j_order, basis);
            if (!out_path.empty()) write_atomic(out_path, dump(to_json(q)));
            if (!report_path.empty()) write_atomic(report_path, dump(report));
            if (out_path.empty() && report_path.empty()) out << dump(report);
        } else if (*perturb_cmd) {
            if (!*p_phases && !*p_seed) throw InputError("perturb needs --phases or --char-seed");
            std::vector<double> phases;
            if (*p_phases) phases = parse_doubles(phases_text, "--phases");
            const ExpMapping f = read_mapping_file(input);
            const FreqLattice lat = lattice_of(f);
            const Character chi = *p_phases ? Character(lat, phases) : random_character(lat, char_seed);
            emit(out_path, dump(to_json(perturb(f, chi))), out);
        } else if (*convexity_cmd) {
            std::ifstream in(input, std::ios::binary);
            if (!in) throw InputError("cannot open " + input);
            Raster r = read_csv(in);
            if (!meta_path.empty()) {
                std::ifstream mf(meta_path, std::ios::binary);
                if (!mf) throw InputError("cannot open " + meta_path);
                const Json meta = Json::parse(mf, nullptr, false);
                if (meta.is_discarded() || !meta.is_object() || !meta.contains("components") ||
                    !meta["components"].is_number_unsigned())
                    throw InputError(meta_path + ": expected raster metadata with a components count");
                r.meta.components = meta["components"].get<std::size_t>();
            }
            const auto comps = complement_components(r);
            Json j = to_json(comps);
            j["count"] = comps.size();
            emit(out_path, dump(j), out);
        } else if (*examples_cmd) {
            std::error_code ec;
            fs::create_directories(examples_dir, ec);
            if (ec) throw InputError("cannot create " + examples_dir + ": " + ec.message());
            for (const auto& [name, f] : bundled_fixtures())
                write_atomic((fs::path(examples_dir) / (name + ".json")).string(), dump(to_json(f)));
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedDimension& e) {
        err << "unsupported: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedOperation& e) {
        err << "unsupported: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace expamoeba
