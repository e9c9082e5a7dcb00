#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hwepi/analytics.hpp"
#include "hwepi/batch.hpp"
#include "hwepi/config.hpp"
#include "hwepi/csv.hpp"
#include "hwepi/epidemic.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/experiments.hpp"
#include "hwepi/fine_library.hpp"
#include "hwepi/manifest.hpp"
#include "hwepi/population.hpp"
#include "hwepi/tables.hpp"

namespace fs = std::filesystem;
using namespace hwepi;

namespace {

struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out;
};

Config load_or_default(const std::string& path, const ModelParams& fallback) {
    if (path.empty()) return Config{fallback, std::nullopt};
    return load_config(path);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    return f;
}

/// Flags the manifest stores separately or that must not influence content.
const std::set<std::string> kVolatile{"--config", "--out", "--out-dir", "--threads", "--seed"};

std::vector<std::string> stable_args(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& a = raw[i];
        const auto eq = a.find('=');
        const std::string name = a.substr(0, eq);
        if (kVolatile.count(name)) {
            if (eq == std::string::npos) ++i;
            continue;
        }
        out.push_back(a);
    }
    return out;
}

void record(const std::string& sub, const std::vector<std::string>& raw, const Config& cfg, std::uint64_t seed,
            const fs::path& out, bool is_dir, const std::vector<fs::path>& files, double seconds) {
    ExperimentManifest m;
    m.subcommand = sub;
    m.args = stable_args(raw);
    m.config = format_config(cfg);
    m.seed = seed;
    m.out_flag = is_dir ? "--out-dir" : "--out";
    const fs::path base = is_dir ? out : out.parent_path();
    for (const auto& f : files) m.outputs.push_back({fs::relative(f, base.empty() ? fs::path(".") : base).generic_string(), sha256_file(f)});
    m.wall_seconds = seconds;
    m.threads = omp_get_max_threads();
    write_manifest(m, is_dir ? out / "manifest.json" : fs::path(out.string() + ".manifest.json"));
}

int run_cli(const std::vector<std::string>& argv);

int replay(const fs::path& manifest_path, int threads, fs::path out_dir) {
    const auto m = read_manifest(manifest_path);
    if (out_dir.empty()) out_dir = manifest_path.parent_path() / "replay";
    fs::create_directories(out_dir);
    const fs::path cfg = out_dir / "replay_config.txt";
    {
        auto f = open_out(cfg);
        f << m.config;
    }
    std::vector<std::string> args{"hwepi", m.subcommand};
    args.insert(args.end(), m.args.begin(), m.args.end());
    args.insert(args.end(), {"--config", cfg.string(), "--seed", std::to_string(m.seed)});
    if (threads > 0) args.insert(args.end(), {"--threads", std::to_string(threads)});
    fs::path target = out_dir;
    if (m.out_flag == "--out") {
        if (m.outputs.size() != 1) throw ConfigError("manifest with --out must list one output");
        target = out_dir / m.outputs.front().file;
    }
    args.insert(args.end(), {m.out_flag, target.string()});
    if (const int rc = run_cli(args); rc != 0) return rc;
    bool same = true;
    for (const auto& o : m.outputs) {
        const fs::path f = out_dir / o.file;
        const auto h = fs::exists(f) ? sha256_file(f) : std::string("missing");
        const bool ok = h == o.sha256;
        same = same && ok;
        std::cout << (ok ? "identical " : "DIFFERENT ") << o.file << '\n';
    }
    return same ? 0 : 1;
}

int run_cli(const std::vector<std::string>& argv) {
    CLI::App app{"Household-workplace SIR epidemics: simulation and branching-process analytics"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* s, bool config_required) {
        auto* opt = s->add_option("--config", c.config_path, "key=value parameter file");
        if (config_required) opt->required();
        s->add_option("--seed", c.seed, "base seed")->each([&](const std::string&) { c.seed_set = true; });
        s->add_option("--threads", c.threads, "worker threads (0 = OpenMP default)");
    };

    auto* gen = app.add_subcommand("generate", "draw one population and write it as CSV");
    add_common(gen, true);
    gen->add_option("--out", c.out)->required();

    auto* sim = app.add_subcommand("simulate", "batch of final-outcome simulations");
    add_common(sim, true);
    std::int64_t sims = 10000, cutoff = 0;
    std::string fresh = "true";
    sim->add_option("--sims", sims);
    sim->add_option("--cutoff", cutoff, "major outbreak cutoff (default ceil(log n))");
    sim->add_option("--fresh-network", fresh)->check(CLI::IsMember({"true", "false"}));
    sim->add_option("--out", c.out)->required();

    auto* cen = app.add_subcommand("census", "clump and susceptibility-set sizes on one local graph");
    add_common(cen, true);
    cen->add_option("--out", c.out)->required();

    std::int64_t n_mc = 1000000, n_lib = 200000;
    std::string exact = "auto";
    bool unprimed = false;
    auto* tab = app.add_subcommand("tables", "offspring tables of the within-complex epidemic");
    add_common(tab, true);
    std::string kind = "susset";
    tab->add_option("--kind", kind)->check(CLI::IsMember({"clump", "susset", "fine"}));
    tab->add_option("--mc-samples", n_mc);
    tab->add_option("--lib-samples", n_lib);
    tab->add_option("--exact", exact)->check(CLI::IsMember({"auto", "force", "off"}));
    tab->add_option("--out", c.out)->required();

    auto* ana = app.add_subcommand("analyze", "R_L, R*, z and rho");
    add_common(ana, true);
    std::string quantity = "all";
    bool both = false;
    ana->add_option("--quantity", quantity)->check(CLI::IsMember({"rl", "rstar", "z", "rho", "all"}));
    ana->add_option("--mc-samples", n_mc);
    ana->add_option("--lib-samples", n_lib);
    ana->add_option("--exact", exact)->check(CLI::IsMember({"auto", "force", "off"}));
    ana->add_flag("--unprimed-seed-rates", unprimed);
    ana->add_flag("--both-routes", both, "also compute the Laplace-transform route for constant I");
    ana->add_option("--out", c.out)->required();

    std::string theta_grid = "0:0.025:1", d_list = "1,2,3,4", laws = "constant";
    std::int64_t sweep_lib = 0;
    auto* swp = app.add_subcommand("sweep", "z, R* and R_L over a theta grid");
    add_common(swp, false);
    swp->add_option("--theta", theta_grid);
    swp->add_option("--d", d_list);
    swp->add_option("--ip-law", laws, "comma list of constant, exponential, gamma:<k>");
    swp->add_option("--mc-samples", n_mc);
    swp->add_option("--lib-samples", sweep_lib, "library size for rho at non-constant I (0 = skip)");
    swp->add_option("--exact", exact)->check(CLI::IsMember({"auto", "force", "off"}));
    swp->add_option("--out", c.out)->required();

    bool paper_scale = false;
    auto* f1 = app.add_subcommand("fig1", "final-size histograms");
    add_common(f1, false);
    std::int64_t f1_sims = -1;
    f1->add_option("--sims", f1_sims);
    f1->add_flag("--paper-scale", paper_scale);
    f1->add_option("--out-dir", c.out)->required();

    auto* f2 = app.add_subcommand("fig2", "simulated versus limiting rho and z");
    add_common(f2, false);
    std::int64_t f2_sims = -1, f2_majors = -1;
    std::string f2_d = "1,2,3", f2_sizes, cutoff_file;
    f2->add_option("--sims", f2_sims);
    f2->add_option("--majors", f2_majors);
    f2->add_option("--d", f2_d);
    f2->add_option("--sizes", f2_sizes, "comma list of n (default: study grid)");
    f2->add_option("--cutoffs", cutoff_file, "CSV n,d,cutoff");
    f2->add_flag("--paper-scale", paper_scale);
    f2->add_option("--out-dir", c.out)->required();

    auto* f3 = app.add_subcommand("fig3", "z against theta for d = 1..4 and both infectious-period laws");
    add_common(f3, false);
    std::string f3_theta = "0:0.025:1";
    f3->add_option("--theta", f3_theta);
    f3->add_option("--mc-samples", n_mc);
    f3->add_flag("--paper-scale", paper_scale);
    f3->add_option("--out-dir", c.out)->required();

    auto* rep = app.add_subcommand("replay", "rerun a manifest and compare output hashes");
    std::string manifest_path;
    rep->add_option("manifest", manifest_path)->required();
    rep->add_option("--threads", c.threads);
    rep->add_option("--out-dir", c.out);

    std::vector<std::string> rev(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (c.threads > 0) omp_set_num_threads(c.threads);

    const std::vector<std::string> raw(argv.begin() + 2, argv.end());
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    auto settle = [&](Config& cfg, const ModelParams& fallback) {
        cfg = load_or_default(c.config_path, fallback);
        if (!c.seed_set) c.seed = cfg.seed.value_or(1);
        cfg.seed = c.seed;
    };
    Config cfg;

    if (rep->parsed()) return replay(manifest_path, c.threads, c.out);

    if (gen->parsed()) {
        settle(cfg, {});
        cfg.params.validate();
        if (cfg.params.n <= 0) throw ConfigError("generate needs n");
        const auto pop = generate_population(cfg.params, SeedSpec{c.seed, 0});
        {
            auto f = open_out(c.out);
            write_population_csv(pop, f);
        }
        record("generate", raw, cfg, c.seed, c.out, false, {c.out}, elapsed());
        return 0;
    }
    if (sim->parsed()) {
        settle(cfg, {});
        const auto& p = cfg.params;
        p.validate();
        if (p.n <= 0) throw ConfigError("simulate needs n");
        if (sims < 0) throw ConfigError("--sims must be nonnegative");
        const std::int64_t cut = cutoff > 0 ? cutoff : default_cutoff(p.n);
        BatchOptions b;
        b.sims = sims;
        b.seed = c.seed;
        b.fresh_network = fresh == "true";
        const auto runs = sims > 0 ? run_batch(p, b) : std::vector<RunRecord>{};
        {
            auto f = open_out(c.out);
            f << kSchemaLine << '\n' << "run,n,final_size,severity,initial,major\n";
            for (const auto& r : runs)
                f << r.run << ',' << p.n << ',' << r.final_size << ',' << fmt(r.severity) << ',' << r.initial << ','
                  << (r.final_size >= cut ? 1 : 0) << '\n';
        }
        if (!runs.empty()) {
            const auto sizes = final_sizes(runs);
            const auto s = estimate_rho_z(sizes, p.n, cut);
            std::cout << "runs=" << s.runs << " cutoff=" << cut << " major=" << s.major << " rho_hat=" << fmt(s.rho.value)
                      << " +- " << fmt(s.rho.half_width);
            if (s.z) std::cout << " z_hat=" << fmt(s.z->value) << " +- " << fmt(s.z->half_width);
            std::cout << '\n';
        }
        record("simulate", raw, cfg, c.seed, c.out, false, {c.out}, elapsed());
        return 0;
    }
    if (cen->parsed()) {
        settle(cfg, {});
        cfg.params.validate();
        if (cfg.params.n <= 0) throw ConfigError("census needs n");
        const auto pop = generate_population(cfg.params, SeedSpec{c.seed, 0});
        const auto census = clump_susset_census(pop, cfg.params, SeedSpec{c.seed, 1});
        {
            auto f = open_out(c.out);
            f << kSchemaLine << '\n' << "individual,clump_size,susset_size\n";
            for (std::size_t i = 0; i < census.clump_size.size(); ++i)
                f << i << ',' << census.clump_size[i] << ',' << census.susset_size[i] << '\n';
        }
        record("census", raw, cfg, c.seed, c.out, false, {c.out}, elapsed());
        return 0;
    }
    if (tab->parsed()) {
        settle(cfg, {});
        cfg.params.validate();
        {
            auto f = open_out(c.out);
            if (kind == "fine") {
                build_fine_libraries(cfg.params, n_lib, c.seed).full.write_csv(f);
            } else {
                const auto k = kind == "clump" ? TableKind::clump : TableKind::susset;
                const bool ex = use_exact_tables(cfg.params, parse_exact_mode(exact));
                write_tables_csv(build_tables(cfg.params, k, ex, n_mc, c.seed), f);
            }
        }
        record("tables", raw, cfg, c.seed, c.out, false, {c.out}, elapsed());
        return 0;
    }
    if (ana->parsed()) {
        settle(cfg, {});
        AnalyzeOptions o;
        o.n_mc = n_mc;
        o.n_lib = n_lib;
        o.seed = c.seed;
        o.exact = parse_exact_mode(exact);
        o.unprimed_seed_rates = unprimed;
        o.both_routes = both;
        o.want_rho = quantity == "rho" || quantity == "all";
        const auto r = analyze(cfg.params, o);
        {
            auto f = open_out(c.out);
            write_report_csv(r, f);
        }
        std::cout << "R_L=" << fmt(r.R_L) << " R*=" << fmt(r.R_star) << " z=" << fmt(r.z);
        if (r.rho) std::cout << " rho=" << fmt(*r.rho) << " (" << r.rho_route << ")";
        if (r.near_critical) std::cout << " near-critical";
        std::cout << '\n';
        record("analyze", raw, cfg, c.seed, c.out, false, {c.out}, elapsed());
        if (!r.converged) {
            std::cerr << "error: a fixed-point or root solve did not converge\n";
            return 3;
        }
        return 0;
    }
    if (swp->parsed() || f3->parsed()) {
        const bool fig = f3->parsed();
        settle(cfg, default_sweep_params());
        SweepOptions o;
        o.thetas = parse_grid(fig ? f3_theta : theta_grid);
        o.ds = fig ? std::vector<int>{1, 2, 3, 4} : parse_int_list(d_list);
        if (fig) {
            o.laws = {"constant", "exponential"};
        } else {
            o.laws.clear();
            std::stringstream ss(laws);
            for (std::string s; std::getline(ss, s, ',');) o.laws.push_back(s);
        }
        o.n_mc = fig && paper_scale ? 10000000 : n_mc;
        o.n_lib = fig ? 0 : sweep_lib;
        o.seed = c.seed;
        o.exact = parse_exact_mode(exact);
        const auto rows = run_sweep(cfg.params, o);
        const fs::path out = fig ? fs::path(c.out) / "fig3.csv" : fs::path(c.out);
        {
            auto f = open_out(out);
            write_sweep_csv(rows, f);
        }
        for (const auto& law : o.laws)
            for (int d : o.ds) {
                const auto name = InfectiousPeriod::parse(law).name();
                std::cout << "critical theta d=" << d << " " << name << ": " << fmt(critical_theta(rows, d, name)) << '\n';
            }
        record(fig ? "fig3" : "sweep", raw, cfg, c.seed, c.out, fig, {out}, elapsed());
        return 0;
    }
    if (f1->parsed()) {
        settle(cfg, default_outbreak_params());
        Fig1Options o;
        o.sims = f1_sims >= 0 ? f1_sims : (paper_scale ? 100000 : 10000);
        o.seed = c.seed;
        const auto files = figure1(cfg.params, o, c.out);
        record("fig1", raw, cfg, c.seed, c.out, true, files, elapsed());
        return 0;
    }
    if (f2->parsed()) {
        settle(cfg, default_outbreak_params());
        Fig2Options o;
        o.ds = parse_int_list(f2_d);
        if (!f2_sizes.empty())
            for (int n : parse_int_list(f2_sizes)) o.sizes.push_back(n);
        o.sims = f2_sims >= 0 ? f2_sims : 10000;
        o.majors = f2_majors >= 0 ? f2_majors : (paper_scale ? 10000 : 2000);
        o.seed = c.seed;
        if (!cutoff_file.empty()) {
            std::ifstream in(cutoff_file, std::ios::binary);
            if (!in) throw ConfigError("cannot read " + cutoff_file);
            o.cutoffs = read_cutoffs_csv(in);
        }
        o.analytics.seed = c.seed;
        o.analytics.want_rho = true;
        const auto rows = run_figure2(cfg.params, o);
        const fs::path out = fs::path(c.out) / "fig2.csv";
        const fs::path cut = fs::path(c.out) / "fig2_cutoffs.csv";
        {
            auto f = open_out(out);
            write_fig2_csv(rows, f);
            auto g = open_out(cut);
            write_cutoffs_csv(o.cutoffs.empty() ? fig2_cutoffs() : o.cutoffs, g);
        }
        record("fig2", raw, cfg, c.seed, c.out, true, {out, cut}, elapsed());
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        return run_cli(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
