#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavprod/atoms.hpp"
#include "wavprod/corpus.hpp"
#include "wavprod/divcurl.hpp"
#include "wavprod/paraproduct.hpp"
#include "wavprod/selfcheck.hpp"
#include "wavprod/spaces.hpp"

using json = nlohmann::json;
using namespace wavprod;

namespace {

struct RunConfig {
    std::string filter = "db4";
    std::uint64_t seed = 2026;
    std::string out = ".";
    int J = 8;
    int j0 = 0;
    int dims = 1;
    int count = 10;
    double sparsity = 0.3;
    int band_limit = 4;
    double trunc_level = 4.0;
    int scale_min = 0;
    int scale_max = -1;
};

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    json j = json::parse(is);
    static const std::vector<std::string> known = {
        "filter", "seed", "out", "J", "j0", "dims", "count",
        "sparsity", "band_limit", "trunc_level", "scale_min", "scale_max"};
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::runtime_error("unknown config key '" + key + "'");
    }
    cfg.filter = j.value("filter", cfg.filter);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out = j.value("out", cfg.out);
    cfg.J = j.value("J", cfg.J);
    cfg.j0 = j.value("j0", cfg.j0);
    cfg.dims = j.value("dims", cfg.dims);
    cfg.count = j.value("count", cfg.count);
    cfg.sparsity = j.value("sparsity", cfg.sparsity);
    cfg.band_limit = j.value("band_limit", cfg.band_limit);
    cfg.trunc_level = j.value("trunc_level", cfg.trunc_level);
    cfg.scale_min = j.value("scale_min", cfg.scale_min);
    cfg.scale_max = j.value("scale_max", cfg.scale_max);
    return cfg;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << j.dump(2) << "\n";
}

json cube_json(const DyadicCube& R) {
    json j{{"j", R.j}, {"k", {R.k[0]}}};
    if (R.dims == 2) j["k"].push_back(R.k[1]);
    return j;
}

std::string joined(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

WaveletCoeffs detail_coeffs(const GridFunction& f, const FilterPair& filt) {
    WaveletCoeffs c = dwt_forward(f, f.box().min_level(), filt);
    double l2 = std::sqrt(c.sum_detail_squares());
    if (c.max_abs_scaling() > 1e-8 * std::max(1.0, l2))
        throw std::runtime_error("input has a significant coarse part; subtract the mean first");
    std::fill(c.scaling().begin(), c.scaling().end(), 0.0);
    return c;
}

int cmd_transform(const RunConfig& cfg, const std::string& in, const std::string& report,
                  const std::string& catalog, bool roundtrip) {
    if (!catalog.empty()) {
        std::ofstream os(catalog);
        if (!os) throw std::runtime_error("cannot open " + catalog);
        os << "name,tap_index,lowpass_value\n";
        for (const auto& name : filter_names()) {
            FilterPair filt = load_filter(name);
            for (int t = 0; t < filt.taps(); ++t) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", filt.lowpass[static_cast<std::size_t>(t)]);
                os << name << "," << t << "," << buf << "\n";
            }
        }
        if (in.empty()) return 0;
    }
    GridFunction f = read_grid(in);
    FilterPair filt = load_filter(cfg.filter);
    int j0 = std::max(cfg.j0, f.box().min_level());
    WaveletCoeffs c = dwt_forward(f, j0, filt);

    json levels = json::array();
    for (int j = j0; j < c.J(); ++j) {
        double e = 0.0;
        for (int lam = 1; lam <= c.lambda_count(); ++lam)
            for (double v : c.detail(j, lam)) e += v * v;
        levels.push_back({{"level", j}, {"l2", std::sqrt(e)}});
    }
    double parseval = std::abs(c.sum_detail_squares() + c.sum_scaling_squares() -
                               inner_product(f, f));
    json rep{{"filter", cfg.filter},
             {"J", c.J()},
             {"j0", j0},
             {"scaling_l2", std::sqrt(c.sum_scaling_squares())},
             {"levels", levels},
             {"parseval_residual", parseval}};
    if (roundtrip)
        rep["roundtrip_residual"] = linf_norm(dwt_inverse(c) - f);
    write_json(report.empty() ? joined(cfg.out, "transform_report.json") : report, rep);
    return 0;
}

int cmd_split(const RunConfig& cfg, const std::string& fpath, const std::string& gpath,
              int j0, const std::string& fold, const std::string& prefix) {
    GridFunction f = read_grid(fpath);
    GridFunction g = read_grid(gpath);
    FilterPair filt = load_filter(cfg.filter);
    bool fold_pi2 = !fold.empty();
    if (fold_pi2 && fold != "pi2")
        throw std::runtime_error("--fold-coarse only supports 'pi2'");
    ProductSplit s = paraproduct_split(f, g, j0, filt, fold_pi2);

    write_grid(s.pi1, prefix + "_pi1.gfn");
    write_grid(s.pi2, prefix + "_pi2.gfn");
    write_grid(s.pi3, prefix + "_pi3.gfn");
    write_grid(s.coarse_term, prefix + "_coarse.gfn");

    GridFunction sum = s.pi1 + s.pi2 + s.pi3 + s.coarse_term;
    ProductSplit t = paraproduct_split(g, f, j0, filt, fold_pi2);
    json rep{{"filter", cfg.filter},
             {"j0", j0},
             {"fold_coarse", fold_pi2 ? "pi2" : ""},
             {"identity_residual", linf_norm(sum - f * g)},
             {"symmetry_residual", linf_norm(s.pi2 - t.pi1)},
             {"norms",
              {{"pi1_l2", l2_norm(s.pi1)},
               {"pi2_l2", l2_norm(s.pi2)},
               {"pi3_l2", l2_norm(s.pi3)},
               {"pi3_l1", l1_norm(s.pi3)},
               {"coarse_l2", l2_norm(s.coarse_term)},
               {"T_mean", integrate(s.renormalized())}}}};
    write_json(prefix + "_report.json", rep);
    return 0;
}

int cmd_norms(const RunConfig& cfg, const std::string& in, const std::string& list,
              const std::string& report) {
    GridFunction f = read_grid(in);
    FilterPair filt = load_filter(cfg.filter);
    json out = json::array();
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        double value = 0.0;
        json params{{"filter", cfg.filter}};
        json tols = json::object();
        if (name == "l1") value = l1_norm(f);
        else if (name == "l2") value = l2_norm(f);
        else if (name == "bmo") value = bmo_wavelet_norm(dwt_forward(f, f.box().min_level(), filt));
        else if (name == "bmo+") value = bmo_plus_norm(f, dwt_forward(f, f.box().min_level(), filt));
        else if (name == "h1") {
            value = h1_square_norm(detail_coeffs(f, filt));
        } else if (name == "llog") {
            value = luxemburg_log_norm(f);
            tols["bisection_rel"] = 1e-10;
        } else if (name == "hlog") {
            value = hlog_norm(f);
            tols["bisection_rel"] = 1e-10;
        } else
            throw std::runtime_error("unknown norm '" + name + "'");
        out.push_back({{"norm", name}, {"value", value}, {"params", params}, {"tolerances", tols}});
    }
    write_json(report.empty() ? joined(cfg.out, "norms_report.json") : report, out);
    return 0;
}

int cmd_atoms(const RunConfig& cfg, const std::string& in, const std::string& report) {
    GridFunction f = read_grid(in);
    FilterPair filt = load_filter(cfg.filter);
    WaveletCoeffs c = detail_coeffs(f, filt);
    AtomicDecomposition dec = atomic_decompose(c);
    json terms = json::array();
    for (const auto& t : dec.terms)
        terms.push_back({{"mu", t.mu}, {"R", cube_json(t.R)}, {"l2", t.atom.l2_norm}});
    json rep{{"filter", cfg.filter},
             {"atoms", terms},
             {"l1_mass", dec.l1_mass},
             {"h1", h1_square_norm(c)},
             {"l1_mass_over_h1", dec.mass_ratio}};
    write_json(report.empty() ? joined(cfg.out, "atoms_report.json") : report, rep);
    return 0;
}

int cmd_holder(const RunConfig& cfg, const std::string& fpath, const std::string& gpath,
               const std::string& report) {
    GridFunction f = read_grid(fpath);
    GridFunction g = read_grid(gpath);
    FilterPair filt = load_filter(cfg.filter);
    HolderReport r = holder_product_bound(f, g, dwt_forward(g, g.box().min_level(), filt));
    json rep{{"filter", cfg.filter},
             {"llog_product", r.llog_product},
             {"l1_f", r.l1_f},
             {"bmo_plus_g", r.bmo_plus_g},
             {"ratio", r.ratio}};
    write_json(report.empty() ? joined(cfg.out, "holder_report.json") : report, rep);
    return 0;
}

int cmd_divcurl(const RunConfig& cfg, const std::string& upath, const std::string& vpath,
                const std::string& report) {
    GridFunction u = read_grid(upath);
    GridFunction v = read_grid(vpath);
    FilterPair filt = load_filter(cfg.filter);
    auto [F, G] = potential_fields(u, v);
    DivCurlReport r = divcurl_product(F, G, filt);
    json rep{{"curl_residual", r.curl_residual},
             {"div_residual", r.div_residual},
             {"riesz_identity_residual", r.riesz_identity_residual},
             {"integral_FG", r.integral_FG},
             {"hlog", r.hlog},
             {"h1_F", r.h1_F},
             {"bmo_plus_G", r.bmo_plus_G},
             {"ratio", r.ratio}};
    write_json(report.empty() ? joined(cfg.out, "divcurl_report.json") : report, rep);
    return 0;
}

int cmd_gen(const RunConfig& cfg, const std::string& kind, const std::string& prefix) {
    CorpusSpec spec;
    if (kind == "finite-wavelet-random") spec.kind = CorpusKind::FiniteWaveletRandom;
    else if (kind == "atom") spec.kind = CorpusKind::Atom;
    else if (kind == "bmo-log-exemplar") spec.kind = CorpusKind::BmoLogExemplar;
    else if (kind == "band-limited-potential") spec.kind = CorpusKind::BandLimitedPotential;
    else throw std::runtime_error("unknown corpus kind '" + kind + "'");
    spec.box.dims = cfg.dims;
    spec.J = cfg.J;
    spec.filter = cfg.filter;
    spec.count = cfg.count;
    spec.sparsity = cfg.sparsity;
    spec.band_limit = cfg.band_limit;
    spec.trunc_level = cfg.trunc_level;
    spec.scale_min = cfg.scale_min;
    spec.scale_max = cfg.scale_max;
    if (spec.kind == CorpusKind::Atom && spec.scale_min == 0)
        spec.scale_min = spec.box.min_level();

    auto corpus = gen_corpus(spec, cfg.seed);
    json manifest = json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::string name = prefix + "_" + std::to_string(i) + ".gfn";
        std::string path = joined(cfg.out, name);
        write_grid(corpus[i].fun, path);
        json entry{{"index", i}, {"file", name}};
        if (corpus[i].is_atom) entry["R"] = cube_json(corpus[i].R);
        manifest.push_back(entry);
    }
    json rep{{"kind", kind}, {"seed", cfg.seed}, {"J", cfg.J}, {"dims", cfg.dims},
             {"count", cfg.count}, {"items", manifest}};
    write_json(joined(cfg.out, prefix + "_manifest.json"), rep);
    return 0;
}

int cmd_selfcheck(const RunConfig& cfg, const std::string& report) {
    auto results = run_selfcheck(cfg.seed);
    json arr = json::array();
    bool all_pass = true;
    std::string first_fail;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-38s measured %.3e tolerance %.1f (%s)\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.tolerance,
                    r.note.c_str());
        arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                       {"measured", r.measured}, {"tolerance", r.tolerance}, {"note", r.note}});
        if (!r.pass && first_fail.empty()) first_fail = r.name;
        all_pass = all_pass && r.pass;
    }
    json rep{{"pass", all_pass}, {"seed", cfg.seed}, {"criteria", arr}};
    if (!first_fail.empty()) rep["first_failure"] = first_fail;
    write_json(report.empty() ? joined(cfg.out, "selfcheck_report.json") : report, rep);
    if (!all_pass) std::fprintf(stderr, "selfcheck failed at: %s\n", first_fail.c_str());
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet paraproducts, Hardy/BMO norms, and div-curl products on dyadic grids"};
    app.require_subcommand(1);

    std::string config_path, filter_flag, out_flag;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--seed", seed_flag, "random seed")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--filter", filter_flag, "wavelet filter name (haar, db2..db8)");
    app.add_option("--out", out_flag, "output directory");

    std::string in, fpath, gpath, upath, vpath, report, prefix = "out", fold, norm_list = "l1,l2";
    std::string catalog, kind = "finite-wavelet-random";
    int j0 = 0;
    bool roundtrip = false;

    auto* transform = app.add_subcommand("transform", "wavelet analysis of a grid function")->fallthrough();
    transform->add_option("--in", in, "input GFN1 file");
    transform->add_option("--j0", j0, "coarsest level");
    transform->add_option("--report", report, "JSON report path");
    transform->add_option("--catalog", catalog, "dump the filter catalog as CSV");
    transform->add_flag("--roundtrip", roundtrip, "also verify reconstruction");

    auto* split = app.add_subcommand("split", "paraproduct splitting fg = pi1+pi2+pi3+coarse")->fallthrough();
    split->add_option("--f", fpath, "first factor (GFN1)")->required();
    split->add_option("--g", gpath, "second factor (GFN1)")->required();
    split->add_option("--j0", j0, "coarsest level");
    split->add_option("--fold-coarse", fold, "fold the coarse term into pi2");
    split->add_option("--out-prefix", prefix, "prefix for output files");

    auto* norms = app.add_subcommand("norms", "norms of a grid function")->fallthrough();
    norms->add_option("--in", in, "input GFN1 file")->required();
    norms->add_option("--norms", norm_list, "comma list: l1,l2,bmo,bmo+,h1,llog,hlog");
    norms->add_option("--report", report, "JSON report path");

    auto* atoms = app.add_subcommand("atoms", "atomic decomposition of a mean-free function")->fallthrough();
    atoms->add_option("--in", in, "input GFN1 file")->required();
    atoms->add_option("--report", report, "JSON report path");

    auto* holder = app.add_subcommand("holder", "product bound ||fg||_Llog vs ||f||_1 ||g||_BMO+")->fallthrough();
    holder->add_option("--f", fpath, "first factor (GFN1)")->required();
    holder->add_option("--g", gpath, "second factor (GFN1)")->required();
    holder->add_option("--report", report, "JSON report path");

    auto* divcurl = app.add_subcommand("divcurl", "div-curl product pipeline from two potentials")->fallthrough();
    divcurl->add_option("--u", upath, "curl-free potential (GFN1, 2D)")->required();
    divcurl->add_option("--v", vpath, "div-free potential (GFN1, 2D)")->required();
    divcurl->add_option("--report", report, "JSON report path");

    auto* gen = app.add_subcommand("gen", "generate a reproducible corpus")->fallthrough();
    gen->add_option("--kind", kind,
                    "finite-wavelet-random | atom | bmo-log-exemplar | band-limited-potential");
    gen->add_option("--out-prefix", prefix, "prefix for generated files");
    int g_J = 0, g_dims = 0, g_count = 0, g_scale_min = 0, g_scale_max = 0, g_band = 0;
    double g_sparsity = 0.0, g_trunc = 0.0;
    gen->add_option("--J", g_J, "resolution level");
    gen->add_option("--dims", g_dims, "1 or 2");
    gen->add_option("--count", g_count, "number of items");
    gen->add_option("--sparsity", g_sparsity, "coefficient fill probability");
    gen->add_option("--scale-min", g_scale_min, "coarsest level used");
    gen->add_option("--scale-max", g_scale_max, "finest level used");
    gen->add_option("--band-limit", g_band, "frequency cap for potentials");
    gen->add_option("--trunc-level", g_trunc, "cap for the log exemplar");

    auto* selfcheck = app.add_subcommand("selfcheck", "run the acceptance criteria")->fallthrough();
    selfcheck->add_option("--report", report, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed_flag;
        if (!filter_flag.empty()) cfg.filter = filter_flag;
        if (!out_flag.empty()) cfg.out = out_flag;

        if (transform->parsed()) return cmd_transform(cfg, in, report, catalog, roundtrip);
        if (split->parsed()) return cmd_split(cfg, fpath, gpath, j0, fold, prefix);
        if (norms->parsed()) return cmd_norms(cfg, in, norm_list, report);
        if (atoms->parsed()) return cmd_atoms(cfg, in, report);
        if (holder->parsed()) return cmd_holder(cfg, fpath, gpath, report);
        if (divcurl->parsed()) return cmd_divcurl(cfg, upath, vpath, report);
        if (gen->parsed()) {
            if (gen->count("--J")) cfg.J = g_J;
            if (gen->count("--dims")) cfg.dims = g_dims;
            if (gen->count("--count")) cfg.count = g_count;
            if (gen->count("--sparsity")) cfg.sparsity = g_sparsity;
            if (gen->count("--scale-min")) cfg.scale_min = g_scale_min;
            if (gen->count("--scale-max")) cfg.scale_max = g_scale_max;
            if (gen->count("--band-limit")) cfg.band_limit = g_band;
            if (gen->count("--trunc-level")) cfg.trunc_level = g_trunc;
            return cmd_gen(cfg, kind, prefix);
        }
        if (selfcheck->parsed()) return cmd_selfcheck(cfg, report);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
