#include "hwepi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hwepi/csv.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/tables.hpp"

namespace hwepi {

ModelParams default_outbreak_params() {
    ModelParams p;
    p.h = 4;
    p.d = 1;
    p.theta = 0.4;
    p.rates = from_reparam({3.0, 0.025, 0.5});
    return p;
}

ModelParams default_sweep_params() {
    ModelParams p = default_outbreak_params();
    p.h = 3;
    return p;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(seed ^ mix64(a * 0x9e3779b97f4a7c15ULL + b));
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        const double a = parse_double(parts[0]), step = parse_double(parts[1]), b = parse_double(parts[2]);
        if (step <= 0.0 || b < a) throw ConfigError("bad grid '" + text + "'");
        const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9));
        for (std::int64_t i = 0; i <= count; ++i) out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
        return out;
    }
    for (const auto& s : split(text, ',')) out.push_back(parse_double(s));
    if (out.empty()) throw ConfigError("empty grid");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& s : split(text, ',')) out.push_back(static_cast<int>(parse_int(s)));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::vector<SweepRow> run_sweep(const ModelParams& base, const SweepOptions& opts) {
    if (opts.thetas.empty()) throw ConfigError("sweep needs at least one theta");
    std::vector<SweepRow> rows;
    for (const auto& law : opts.laws) {
        for (int d : opts.ds) {
            ModelParams p = base;
            p.d = d;
            p.n = 0;
            p.infectious_period = InfectiousPeriod::parse(law);
            p.theta = opts.thetas.front();
            p.validate();
            const bool exact = use_exact_tables(p, opts.exact);
            const auto banks =
                build_banks(p, TableKind::susset, exact, opts.thetas, opts.n_mc, opts.seed, opts.replicates);
            const double bg = p.rates.beta_g;
            for (double th : opts.thetas) {
                p.theta = th;
                const auto t = banks.at(th);
                SweepRow r;
                r.theta = th;
                r.d = d;
                r.ip_law = p.infectious_period.name();
                r.n_mc = exact ? 0 : opts.n_mc;
                const auto m = CoarseModel::from(t.pmf, th);
                r.R_L = compute_R_L(mean_matrix(m));
                r.R_star = compute_R_star(m, bg);
                const auto zs = solve_final_size_z(m, bg, opts.solver);
                r.z = zs.z;
                r.residual = zs.residual;
                if (!t.exact) {
                    std::vector<double> rl, rs, zz;
                    for (const auto& rep : t.replicates) {
                        const auto mr = CoarseModel::from(rep, th);
                        rl.push_back(compute_R_L(mean_matrix(mr)));
                        rs.push_back(compute_R_star(mr, bg));
                        zz.push_back(solve_final_size_z(mr, bg, opts.solver).z);
                    }
                    r.R_L_se = replicate_stats(rl).second;
                    r.R_star_se = replicate_stats(rs).second;
                    r.z_se = replicate_stats(zz).second;
                }
                if (p.infectious_period.is_constant() && exact) {
                    r.rho = 1.0 - route_a_xi(m, bg).xi;
                } else if (opts.n_lib > 0) {
                    const auto lib = FineLibrary::build(p, opts.n_lib, SeedSpec{opts.seed, 0xf17eULL});
                    r.rho = 1.0 - route_b(p, lib, opts.solver).xi;
                } else {
                    r.rho = std::numeric_limits<double>::quiet_NaN();
                }
                rows.push_back(r);
            }
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << kSchemaLine << '\n' << "theta,d,ip_law,R_L,R_star,z,rho,residual,n_mc,R_L_se,R_star_se,z_se\n";
    for (const auto& r : rows)
        out << fmt(r.theta) << ',' << r.d << ',' << r.ip_law << ',' << fmt(r.R_L) << ',' << fmt(r.R_star) << ','
            << fmt(r.z) << ',' << fmt(r.rho) << ',' << fmt(r.residual) << ',' << r.n_mc << ',' << fmt(r.R_L_se) << ','
            << fmt(r.R_star_se) << ',' << fmt(r.z_se) << '\n';
}

double critical_theta(const std::vector<SweepRow>& rows, int d, const std::string& law) {
    const SweepRow* prev = nullptr;
    for (const auto& r : rows) {
        if (r.d != d || r.ip_law != law) continue;
        if (prev && prev->R_star <= 1.0 && r.R_star > 1.0) {
            if (!std::isfinite(r.R_star)) return r.theta;
            return prev->theta + (1.0 - prev->R_star) * (r.theta - prev->theta) / (r.R_star - prev->R_star);
        }
        prev = &r;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void write_histogram_csv(const std::vector<RunRecord>& runs, double theta, std::int64_t n, std::ostream& out) {
    out << kSchemaLine << '\n' << "theta,n,final_size,fraction,count\n";
    std::map<std::int64_t, std::int64_t> counts;
    for (const auto& r : runs) ++counts[r.final_size];
    for (const auto& [z, c] : counts)
        out << fmt(theta) << ',' << n << ',' << z << ',' << fmt(static_cast<double>(z) / static_cast<double>(n)) << ','
            << c << '\n';
}

std::vector<std::filesystem::path> figure1(const ModelParams& base, const Fig1Options& opts,
                                           const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::vector<std::pair<double, std::int64_t>> panels{{0.075, 1000}, {0.4, 1000}, {0.4, 600}, {0.4, 200}};
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        ModelParams p = base;
        p.theta = panels[i].first;
        p.n = panels[i].second;
        p.validate();
        std::vector<RunRecord> runs;
        if (opts.sims > 0) {
            BatchOptions b;
            b.sims = opts.sims;
            b.seed = derived_seed(opts.seed, 1, i);
            runs = run_batch(p, b);
        }
        const auto path = out_dir / ("fig1_panel" + std::to_string(i + 1) + ".csv");
        std::ofstream f(path, std::ios::binary);
        write_histogram_csv(runs, p.theta, p.n, f);
        files.push_back(path);
    }
    return files;
}

std::map<std::pair<std::int64_t, int>, std::int64_t> fig2_cutoffs() {
    std::map<std::pair<std::int64_t, int>, std::int64_t> c;
    const std::int64_t small[3] = {120, 240, 480};
    const std::int64_t table[3][3] = {{36, 75, 150}, {50, 100, 150}, {25, 50, 100}};
    for (int d = 1; d <= 3; ++d) {
        for (int i = 0; i < 3; ++i) c[{small[i], d}] = table[d - 1][i];
        for (auto n : fig2_sizes(4, d))
            if (n > 480) c[{n, d}] = 200;
    }
    return c;
}

std::map<std::pair<std::int64_t, int>, std::int64_t> read_cutoffs_csv(std::istream& in) {
    CsvReader reader(in, {"n", "d", "cutoff"});
    std::map<std::pair<std::int64_t, int>, std::int64_t> c;
    std::vector<std::string> row;
    while (reader.next(row)) c[{parse_int(row[0]), static_cast<int>(parse_int(row[1]))}] = parse_int(row[2]);
    return c;
}

void write_cutoffs_csv(const std::map<std::pair<std::int64_t, int>, std::int64_t>& cutoffs, std::ostream& out) {
    out << kSchemaLine << '\n' << "n,d,cutoff\n";
    for (const auto& [key, c] : cutoffs) out << key.first << ',' << key.second << ',' << c << '\n';
}

std::vector<std::int64_t> fig2_sizes(int h, int d) {
    const std::int64_t w = static_cast<std::int64_t>(h) * d;
    std::vector<std::int64_t> out;
    for (std::int64_t n : {120, 240, 480, 960, 1440, 1920, 2560, 3200, 3840}) {
        if (n % w == 0) {
            out.push_back(n);
            continue;
        }
        // Nearest multiple of w, matching 2556 and 3204 for w = 12.
        const std::int64_t down = n / w * w, up = down + w;
        out.push_back(n - down <= up - n ? down : up);
    }
    return out;
}

std::vector<Fig2Row> run_figure2(const ModelParams& base, const Fig2Options& opts) {
    const auto cutoffs = opts.cutoffs.empty() ? fig2_cutoffs() : opts.cutoffs;
    std::vector<Fig2Row> rows;
    for (int d : opts.ds) {
        ModelParams p = base;
        p.d = d;
        p.n = 0;
        auto ao = opts.analytics;
        const auto report = analyze(p, ao);
        const auto sizes = opts.sizes.empty() ? fig2_sizes(p.h, d) : opts.sizes;
        for (std::int64_t n : sizes) {
            if (n % p.w() != 0) {
                const std::int64_t adj = n / p.w() * p.w();
                std::cerr << "warning: n=" << n << " is not a multiple of w=" << p.w() << "; using " << adj << '\n';
                n = adj;
            }
            p.n = n;
            p.validate();
            Fig2Row row;
            row.n = n;
            row.d = d;
            const auto it = cutoffs.find({n, d});
            row.cutoff = it != cutoffs.end() ? it->second : default_cutoff(n);
            BatchOptions b;
            b.sims = opts.sims;
            b.seed = derived_seed(opts.seed, 2, static_cast<std::uint64_t>(n) * 16 + static_cast<std::uint64_t>(d));
            const auto runs = run_batch(p, b);
            const auto sizes_rho = final_sizes(runs);
            row.rho_batch = estimate_rho_z(sizes_rho, n, row.cutoff);
            const auto majors = collect_major_runs(
                p, opts.majors, row.cutoff,
                derived_seed(opts.seed, 3, static_cast<std::uint64_t>(n) * 16 + static_cast<std::uint64_t>(d)));
            const auto sizes_z = final_sizes(majors);
            row.z_batch = estimate_rho_z(sizes_z, n, row.cutoff);
            row.rho = report.rho.value_or(std::numeric_limits<double>::quiet_NaN());
            row.z = report.z;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_fig2_csv(const std::vector<Fig2Row>& rows, std::ostream& out) {
    out << kSchemaLine << '\n'
        << "n,d,cutoff,runs,rho_hat,rho_lo,rho_hi,majors,z_hat,z_lo,z_hi,rho,z\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        const auto& zb = r.z_batch.z;
        out << r.n << ',' << r.d << ',' << r.cutoff << ',' << r.rho_batch.runs << ',' << fmt(r.rho_batch.rho.value)
            << ',' << fmt(r.rho_batch.rho.lo()) << ',' << fmt(r.rho_batch.rho.hi()) << ',' << r.z_batch.major << ','
            << fmt(zb ? zb->value : nan) << ',' << fmt(zb ? zb->lo() : nan) << ',' << fmt(zb ? zb->hi() : nan) << ','
            << fmt(r.rho) << ',' << fmt(r.z) << '\n';
    }
}

}  // namespace hwepi
