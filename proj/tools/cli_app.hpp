#pragma once

// Experiment driver behind ifsframe_cli. Every output file echoes the run
// configuration; identical arguments give byte-identical files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ifsframe/catalog.hpp"
#include "ifsframe/io.hpp"
#include "ifsframe/ifsframe.hpp"

namespace ifsframe::cli {

namespace fs = std::filesystem;

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

inline double to_double(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw UsageError("not a number: '" + s + "'");
        }
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("not a number: '" + s + "'");
    }
}

inline std::vector<double> number_list(const std::string& s) {
    std::vector<double> out;
    for (const std::string& tok : split(s, ',')) {
        if (!tok.empty()) {
            out.push_back(to_double(tok));
        }
    }
    if (out.empty()) {
        throw UsageError("empty number list");
    }
    return out;
}

/// "lo:hi:count" with geometric spacing.
inline std::vector<double> parse_radii(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 3) {
        throw UsageError("--radii expects lo:hi:count");
    }
    return geometric_radii(to_double(parts[0]), to_double(parts[1]),
                           static_cast<std::size_t>(to_double(parts[2])));
}

/// "lo:hi:step" inclusive linear grid.
inline std::vector<double> parse_linear(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 3) {
        throw UsageError("expected lo:hi:step");
    }
    double lo = to_double(parts[0]);
    double hi = to_double(parts[1]);
    double step = to_double(parts[2]);
    if (!(step > 0.0) || hi < lo) {
        throw UsageError("grid needs step > 0 and hi >= lo");
    }
    std::vector<double> out;
    auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::int64_t k = 0; k <= n; ++k) {
        out.push_back(lo + step * static_cast<double>(k));
    }
    return out;
}

inline AffineIfs parse_ifs(const std::string& arg) {
    if (auto named = catalog_lookup(arg)) {
        return *named;
    }
    return ifs_from_json(json_inline_or_file(arg));
}

inline Measure load_measure(const std::string& path) {
    return measure_from_json(json_inline_or_file(path));
}

/// Writes `text` to dir/name through a temporary file and a rename.
inline void write_atomically(const fs::path& dir, const std::string& name, const std::string& text) {
    fs::create_directories(dir);
    fs::path target = dir / name;
    fs::path tmp = dir / (name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw UsageError("cannot write '" + tmp.string() + "'");
        }
        out << text;
    }
    fs::rename(tmp, target);
}

inline std::string csv_with_config(const json& config, const std::string& body) {
    return "# config: " + config.dump() + "\n" + body;
}

struct Options {
    std::string ifs;
    std::string complement;
    std::string dual;
    bool counting = false;
    std::vector<std::string> measures;
    std::string levels = "1";
    std::string lambdas = "256";
    double tol = 1e-12;
    std::string radii;
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string t_range = "-100:100:1";
    std::int64_t c_max = -1;
    double alpha = 1.0;
    std::string hull;
    double r = 1.0;
    std::string rule = "left";
    std::string offsets;
    double uniform = 0.0;
    std::string t_values = "0.5";
    double cutoff = 200.0;
    double step = 1.0 / 64.0;
    std::size_t level = 0;
    std::string coeffs;
    std::string t_grid = "100,1000,10000";
};

inline json base_config(const std::string& sub, const Options& o) {
    return json{{"subcommand", sub}, {"tol", o.tol}, {"seed", o.seed}};
}

// Candidate measure for frame / Beurling runs at truncation lambda.
inline AtomicMeasure candidate_measure(const Options& o, double lambda, std::string& ref) {
    auto half = static_cast<std::int64_t>(std::floor(lambda));
    if (!o.dual.empty()) {
        AffineIfs c = parse_ifs(o.dual);
        ref = "dual_weights(" + to_json(c).dump() + ", |k|<=" + std::to_string(half) + ")";
        return dual_weights(c, half, TruncationBudget{o.tol});
    }
    if (o.counting) {
        ref = "counting(|k|<=" + std::to_string(half) + ")";
        return integer_counting(half);
    }
    if (!o.measures.empty()) {
        Measure nu = load_measure(o.measures.front());
        const auto* a = std::get_if<AtomicMeasure>(&nu);
        if (a == nullptr) {
            throw UsageError("frame analysis needs an atomic measure; discretize it first");
        }
        std::vector<Atom> kept;
        for (const Atom& x : a->atoms()) {
            if (std::abs(x.point) <= lambda) {
                kept.push_back(x);
            }
        }
        ref = o.measures.front() + " restricted to |x|<=" + format_number(lambda);
        return AtomicMeasure(std::move(kept));
    }
    throw UsageError("choose a candidate measure: --dual, --counting or --measure");
}

inline int run_catalog(const Options& o, std::ostream& out) {
    json cat = json::array();
    for (const CatalogEntry& e : builtin_catalog()) {
        cat.push_back({{"name", e.name}, {"ifs", to_json(e.ifs)}, {"description", e.description}});
    }
    json doc{{"config", base_config("catalog", o)}, {"catalog", cat}};
    write_atomically(o.out, "catalog.json", doc.dump(2) + "\n");
    out << cat.dump(2) << "\n";
    return 0;
}

inline int run_ft(const Options& o, std::ostream& out) {
    AffineIfs ifs = parse_ifs(o.ifs);
    json config = base_config("ft", o);
    config["ifs"] = to_json(ifs);
    config["t_range"] = o.t_range;
    std::string body = "t,re,im,abs\n";
    for (double t : parse_linear(o.t_range)) {
        cplx v = ft_invariant(ifs, t, TruncationBudget{o.tol});
        body += format_number(t) + "," + format_number(v.real()) + "," + format_number(v.imag()) +
                "," + format_number(std::abs(v)) + "\n";
    }
    write_atomically(o.out, "ft.csv", csv_with_config(config, body));
    out << json{{"written", (fs::path(o.out) / "ft.csv").string()}}.dump() << "\n";
    return 0;
}

inline int run_frame_bounds(const Options& o, std::ostream& out) {
    AffineIfs ifs = parse_ifs(o.ifs);
    json config = base_config("frame-bounds", o);
    config["ifs"] = to_json(ifs);
    config["levels"] = o.levels;
    config["lambdas"] = o.lambdas;
    config["dual"] = o.dual.empty() ? json(nullptr) : to_json(parse_ifs(o.dual));
    config["counting"] = o.counting;
    config["measure"] = o.measures.empty() ? json(nullptr) : json(o.measures.front());
    json reports = json::array();
    std::string body = frame_csv_header() + "\n";
    for (double lvl : number_list(o.levels)) {
        for (double lambda : number_list(o.lambdas)) {
            std::string ref;
            AtomicMeasure nu = candidate_measure(o, lambda, ref);
            FrameReport rep = frame_bounds(ifs, static_cast<std::size_t>(lvl), nu, TruncationBudget{o.tol});
            rep.lambda_truncation = lambda;
            rep.measure_ref = ref;
            reports.push_back(to_json(rep));
            body += to_csv_row(rep) + "\n";
        }
    }
    write_atomically(o.out, "frame_bounds.csv", csv_with_config(config, body));
    write_atomically(o.out, "frame_report.json",
                     json{{"config", config}, {"reports", reports}}.dump(2) + "\n");
    out << reports.dump(2) << "\n";
    return 0;
}

inline int run_dual(const Options& o, std::ostream& out) {
    AffineIfs ifs = parse_ifs(o.ifs);
    std::int64_t c_max = o.c_max >= 0 ? o.c_max : ifs.scale() - 1;
    auto complements = find_complement(ifs, c_max);
    auto lambda = static_cast<std::int64_t>(std::floor(number_list(o.lambdas).front()));
    json config = base_config("dual", o);
    config["ifs"] = to_json(ifs);
    config["c_max"] = c_max;
    config["lambda"] = lambda;
    json doc{{"config", config}, {"complements", complements}};
    if (complements.empty()) {
        doc["measure"] = nullptr;
    } else {
        AffineIfs c(ifs.scale(), complements.front());
        doc["complement"] = to_json(c);
        doc["measure"] = to_json(Measure{dual_weights(c, lambda, TruncationBudget{o.tol})});
    }
    write_atomically(o.out, "dual.json", doc.dump(2) + "\n");
    out << json{{"complements", complements}}.dump() << "\n";
    return 0;
}

inline int run_beurling(const Options& o, std::ostream& out) {
    json config = base_config("beurling", o);
    Measure nu;
    if (!o.measures.empty()) {
        nu = load_measure(o.measures.front());
        config["measure"] = o.measures.front();
    } else {
        std::string ref;
        nu = candidate_measure(o, number_list(o.lambdas).front(), ref);
        config["measure"] = ref;
    }
    std::vector<double> radii = o.radii.empty() ? default_radii() : parse_radii(o.radii);
    config["radii"] = radii;
    config["alpha"] = o.alpha;
    DensityScan scan = upper_density(nu, o.alpha, radii);
    DimensionEstimate dim = dimension(nu, radii);
    json doc{{"config", config}, {"dimension", to_json(dim)}, {"upper_density_estimate", scan.estimate}};
    if (!o.hull.empty()) {
        auto h = split(o.hull, ':');
        if (h.size() != 2) {
            throw UsageError("--hull expects lo:hi");
        }
        std::vector<double> lower_radii;
        for (double R : radii) {
            if (R <= to_double(h[1]) - to_double(h[0])) {
                lower_radii.push_back(R);
            }
        }
        doc["lower_density"] = lower_density(nu, lower_radii, {to_double(h[0]), to_double(h[1])});
    }
    write_atomically(o.out, "scan.csv", csv_with_config(config, to_csv(scan)));
    write_atomically(o.out, "dimension.json", doc.dump(2) + "\n");
    out << doc["dimension"].dump(2) << "\n";
    return 0;
}

inline int run_discretize(const Options& o, std::ostream& out) {
    if (o.measures.empty()) {
        throw UsageError("discretize needs --measure");
    }
    PointRule rule = PointRule::left();
    if (o.rule == "center") {
        rule = PointRule::center();
    } else if (o.rule == "custom") {
        rule = PointRule::custom(number_list(o.offsets));
    } else if (o.rule != "left") {
        throw UsageError("--rule must be left, center or custom");
    }
    AtomicMeasure d = discretize(load_measure(o.measures.front()), o.r, rule);
    json config = base_config("discretize", o);
    config["measure"] = o.measures.front();
    config["r"] = o.r;
    config["rule"] = o.rule;
    json doc{{"config", config}, {"measure", to_json(Measure{d})}};
    write_atomically(o.out, "discretized.json", doc.dump(2) + "\n");
    out << json{{"atoms", d.size()}, {"mass", d.mass()}}.dump() << "\n";
    return 0;
}

inline int run_convolve(const Options& o, std::ostream& out) {
    if (o.measures.empty()) {
        throw UsageError("convolve needs --measure");
    }
    Measure a = load_measure(o.measures.front());
    Measure b;
    json config = base_config("convolve", o);
    config["measures"] = o.measures;
    if (o.measures.size() >= 2) {
        b = load_measure(o.measures[1]);
    } else if (o.uniform > 0.0) {
        b = DensityMeasure::uniform(0.0, o.uniform);
        config["uniform"] = o.uniform;
    } else {
        throw UsageError("convolve needs a second --measure or --uniform width");
    }
    Measure c = convolve(a, b);
    json doc{{"config", config}, {"measure", to_json(c)}};
    write_atomically(o.out, "convolved.json", doc.dump(2) + "\n");
    out << json{{"mass", total_mass(c)}}.dump() << "\n";
    return 0;
}

inline int run_reconstruct(const Options& o, std::ostream& out) {
    SplitSystem sys(parse_ifs(o.ifs), parse_ifs(o.complement));
    std::vector<cplx> coeffs;
    if (o.coeffs.empty()) {
        coeffs.assign(count_words(sys.base(), o.level), 1.0);
    } else {
        for (double c : number_list(o.coeffs)) {
            coeffs.emplace_back(c, 0.0);
        }
    }
    CylinderFunction f(sys.base(), o.level, coeffs);
    json config = base_config("reconstruct", o);
    config["ifs"] = to_json(sys.base());
    config["complement"] = to_json(sys.complement());
    config["level"] = o.level;
    config["coeffs"] = o.coeffs;
    config["cutoff"] = o.cutoff;
    config["step"] = o.step;
    json reports = json::array();
    for (double t : number_list(o.t_values)) {
        reports.push_back(to_json(fourier_reconstruct(sys, f, t, o.cutoff, o.step, TruncationBudget{o.tol})));
    }
    write_atomically(o.out, "reconstruct.json",
                     json{{"config", config}, {"reports", reports}}.dump(2) + "\n");
    out << reports.dump(2) << "\n";
    return 0;
}

inline int run_counterexample(const Options& o, std::ostream& out) {
    json config = base_config("counterexample", o);
    Measure nu;
    if (!o.measures.empty()) {
        nu = load_measure(o.measures.front());
        config["measure"] = o.measures.front();
    } else {
        nu = mollify(integer_counting(100), 1.0);
        config["measure"] = "mollify(counting(|n|<=100), 1)";
    }
    config["T"] = o.t_grid;
    DecayCertificate cert = lower_bound_decay_certificate(nu, number_list(o.t_grid));
    std::string body = "T,probe\n";
    for (const auto& [T, p] : cert.rows) {
        body += format_number(T) + "," + format_number(p) + "\n";
    }
    json doc{{"config", config},
             {"decreasing", cert.decreasing},
             {"last_over_first", cert.last_over_first}};
    write_atomically(o.out, "counterexample.csv", csv_with_config(config, body));
    write_atomically(o.out, "counterexample.json", doc.dump(2) + "\n");
    out << doc.dump(2) << "\n";
    return 0;
}

inline json error_json(const std::string& kind, const std::string& message) {
    return json{{"error", {{"kind", kind}, {"message", message}}}};
}

/// Runs one CLI invocation. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ifsframe: Fourier frames, Beurling dimension and reconstruction for affine IFS measures"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "absolute tolerance of the infinite product");
        sub->add_option("--seed", o.seed, "seed for std::mt19937_64");
        sub->add_option("--out", o.out, "output directory");
    };
    auto* catalog = app.add_subcommand("catalog", "list built-in systems");
    common(catalog);

    auto* ft = app.add_subcommand("ft", "frequency sweep of the invariant measure's Fourier transform");
    common(ft);
    ft->add_option("--ifs", o.ifs, "IFS descriptor JSON, file, or catalog name")->required();
    ft->add_option("--t-range", o.t_range, "lo:hi:step");

    auto* fb = app.add_subcommand("frame-bounds", "(level, lambda) sweep of cylinder frame bounds");
    common(fb);
    fb->add_option("--ifs", o.ifs)->required();
    fb->add_option("--dual", o.dual, "weight integers by |mu_C^|^2 for this complement IFS");
    fb->add_flag("--counting", o.counting, "integer counting measure");
    fb->add_option("--measure", o.measures, "atomic measure JSON");
    fb->add_option("--level", o.levels, "comma-separated levels");
    fb->add_option("--lambda", o.lambdas, "comma-separated truncations");

    auto* dual = app.add_subcommand("dual", "complement search and dual weights");
    common(dual);
    dual->add_option("--ifs", o.ifs)->required();
    dual->add_option("--c-max", o.c_max, "largest complement digit (default R-1)");
    dual->add_option("--lambda", o.lambdas, "frequency truncation");

    auto* beur = app.add_subcommand("beurling", "density scans and dimension estimate");
    common(beur);
    beur->add_option("--measure", o.measures);
    beur->add_option("--dual", o.dual);
    beur->add_flag("--counting", o.counting);
    beur->add_option("--lambda", o.lambdas);
    beur->add_option("--radii", o.radii, "lo:hi:count, geometric");
    beur->add_option("--alpha", o.alpha);
    beur->add_option("--hull", o.hull, "lo:hi for the lower density");

    auto* disc = app.add_subcommand("discretize", "atomic discretization on r*[k, k+1)");
    common(disc);
    disc->add_option("--measure", o.measures)->required();
    disc->add_option("--r", o.r)->required();
    disc->add_option("--rule", o.rule, "left | center | custom");
    disc->add_option("--offsets", o.offsets, "comma-separated offsets for --rule custom");

    auto* conv = app.add_subcommand("convolve", "convolution of two measures");
    common(conv);
    conv->add_option("--measure", o.measures)->required();
    conv->add_option("--uniform", o.uniform, "convolve with uniform[0, w)");

    auto* rec = app.add_subcommand("reconstruct", "Fourier reconstruction of a cylinder function");
    common(rec);
    rec->add_option("--ifs", o.ifs)->required();
    rec->add_option("--complement", o.complement)->required();
    rec->add_option("--t", o.t_values, "comma-separated evaluation points");
    rec->add_option("--cutoff", o.cutoff);
    rec->add_option("--step", o.step);
    rec->add_option("--level", o.level);
    rec->add_option("--coeffs", o.coeffs, "comma-separated real coefficients (default all 1)");

    auto* cex = app.add_subcommand("counterexample", "T-sweep of the no-frame-measure probe");
    common(cex);
    cex->add_option("--measure", o.measures);
    cex->add_option("--T", o.t_grid, "comma-separated T values");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage_error", e.what()).dump() << "\n";
        return 2;
    }

    try {
        if (*catalog) return run_catalog(o, out);
        if (*ft) return run_ft(o, out);
        if (*fb) return run_frame_bounds(o, out);
        if (*dual) return run_dual(o, out);
        if (*beur) return run_beurling(o, out);
        if (*disc) return run_discretize(o, out);
        if (*conv) return run_convolve(o, out);
        if (*rec) return run_reconstruct(o, out);
        if (*cex) return run_counterexample(o, out);
    } catch (const Error& e) {
        err << error_json(e.kind(), e.what()).dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << error_json("internal_error", e.what()).dump() << "\n";
        return 1;
    }
    return 2;
}

} // namespace ifsframe::cli
