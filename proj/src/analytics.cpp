#include "hwepi/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hwepi/csv.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/fine_types.hpp"

namespace hwepi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power(double x, int c) {
    double r = 1.0;
    for (int i = 0; i < c; ++i) r *= x;
    return r;
}

/// One library source at fixed nu: per distinct offspring vector, sum of weight * e^{-nu A}.
struct Compiled {
    std::vector<double> weight;
    std::vector<const std::vector<std::pair<int, int>>*> z;

    [[nodiscard]] double eval(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t e = 0; e < weight.size(); ++e) {
            double p = weight[e];
            for (const auto& [t, c] : *z[e]) p *= power(x[static_cast<std::size_t>(t)], c);
            s += p;
        }
        return s;
    }
};

Compiled compile(const FineLibrary::Source& src, double nu) {
    Compiled c;
    for (const auto& e : src.entries) {
        double wsum = 0.0;
        for (std::size_t k = 0; k < e.weight.size(); ++k) wsum += e.weight[k] * std::exp(-nu * e.severity[k]);
        if (wsum == 0.0) continue;
        c.weight.push_back(wsum);
        c.z.push_back(&e.z);
    }
    return c;
}

CoarseModel model_of(const CoarseTables& t, int replicate, double theta) {
    return CoarseModel::from(replicate < 0 ? t.pmf : t.replicates[static_cast<std::size_t>(replicate)], theta);
}

/// Value on the full tables plus the replicate standard error (zero for exact tables).
template <class F>
std::pair<double, double> with_stderr(const CoarseTables& t, double theta, F f) {
    const double v = f(model_of(t, -1, theta));
    if (t.exact || t.replicates.empty()) return {v, 0.0};
    std::vector<double> reps;
    for (int r = 0; r < static_cast<int>(t.replicates.size()); ++r) reps.push_back(f(model_of(t, r, theta)));
    return {v, replicate_stats(reps).second};
}

}  // namespace

std::pair<double, double> replicate_stats(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) return {kInf, kInf};
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double k = static_cast<double>(values.size());
    return {mean, std::sqrt(ss / (k - 1.0) / k)};
}

PairSolution solve_progeny_pair(const OffspringPgf& g_h, const OffspringPgf& g_w, double s, const SolverOptions& opts) {
    PairSolution p;
    double x = 0.0, y = 0.0;
    for (p.iterations = 1; p.iterations <= opts.max_iter; ++p.iterations) {
        const double nx = s * g_h(s, x, y);
        const double ny = s * g_w(s, opts.gauss_seidel ? nx : x, y);
        const double change = std::max(std::abs(nx - x), std::abs(ny - y));
        x = nx;
        y = ny;
        if (change < opts.tol) {
            p.converged = true;
            break;
        }
    }
    p.iterations = std::min(p.iterations, opts.max_iter);
    p.h = x;
    p.w = y;
    p.residual = std::max(std::abs(x - s * g_h(s, x, y)), std::abs(y - s * g_w(s, x, y)));
    return p;
}

CoarseModel CoarseModel::from(const std::array<JointPmf3, 3>& pmf, double theta) {
    CoarseModel m;
    m.theta = theta;
    for (std::size_t x = 0; x < 3; ++x) m.g[x] = OffspringPgf(pmf[x]);
    return m;
}

double progeny_pgf(const CoarseModel& m, double s, const SolverOptions& opts, PairSolution* pair) {
    const auto& gr = m[SeedType::R];
    if (m.theta == 0.0) {
        if (pair) *pair = PairSolution{1.0, 1.0, 0, 0.0, true};
        return s * gr(s, 1.0, 1.0);
    }
    const auto p = solve_progeny_pair(m[SeedType::H], m[SeedType::W], s, opts);
    if (pair) *pair = p;
    return (1.0 - m.theta) * s * gr(s, p.h, p.w) + m.theta * m[SeedType::H](s, p.h, p.w) * p.w;
}

Matrix2 mean_matrix(const CoarseModel& m) {
    if (m.theta == 0.0) return Matrix2{};
    const auto& h = m[SeedType::H].mean();
    const auto& w = m[SeedType::W].mean();
    return Matrix2{{{h[1], h[2]}, {w[1], w[2]}}};
}

double compute_R_L(const Matrix2& m) {
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    return (a + d + std::sqrt((a - d) * (a - d) + 4.0 * b * c)) / 2.0;
}

double compute_R_star(const CoarseModel& m, double beta_g) {
    const auto& r = m[SeedType::R].mean();
    if (m.theta == 0.0) return beta_g * (1.0 + r[0]);
    const auto M = mean_matrix(m);
    if (compute_R_L(M) >= 1.0) return kInf;
    const double b1 = 1.0 + m[SeedType::H].mean()[0];
    const double b2 = 1.0 + m[SeedType::W].mean()[0];
    const double a11 = 1.0 - M[0][0], a12 = -M[0][1], a21 = -M[1][0], a22 = 1.0 - M[1][1];
    const double det = a11 * a22 - a12 * a21;
    const double mu_h = (a22 * b1 - a12 * b2) / det;
    const double mu_w = (a11 * b2 - a21 * b1) / det;
    const double th = m.theta;
    return beta_g * (1.0 - 2.0 * th + (1.0 - th) * (r[0] + r[1] * mu_h + r[2] * mu_w) + th * (mu_h + mu_w));
}

FinalSizeSolution solve_final_size_z(const CoarseModel& susset, double beta_g, const SolverOptions& opts) {
    FinalSizeSolution out;
    const double rstar = compute_R_star(susset, beta_g);
    out.near_critical = std::abs(rstar - 1.0) <= 1e-3;
    if (rstar <= 1.0) return out;
    auto F = [&](double z) { return 1.0 - z - progeny_pgf(susset, std::exp(-beta_g * z), opts); };
    double lo = 1e-9, hi = 1.0;
    if (F(lo) <= 0.0) {
        out.bracket_failed = true;
        return out;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) > 0.0 ? lo : hi) = mid;
        ++out.iterations;
    }
    out.z = 0.5 * (lo + hi);
    out.residual = std::abs(F(out.z));
    return out;
}

RootResult leftmost_root(const std::function<double(double)>& g, double tol) {
    RootResult r;
    auto F = [&](double s) {
        ++r.evaluations;
        return g(s) - s;
    };
    auto bisect = [&](double lo, double hi) {
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (F(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    if (F(0.0) <= 0.0) {
        r.xi = 0.0;
        return r;
    }
    if (F(1.0) < -1e-12) {
        r.xi = bisect(0.0, 1.0);
        return r;
    }
    double prev = 0.0;
    for (int k = 1; k <= 52; ++k) {
        const double s = 1.0 - std::ldexp(1.0, -k);
        if (F(s) < 0.0) {
            r.xi = bisect(prev, s);
            return r;
        }
        prev = s;
    }
    r.xi = 1.0;
    return r;
}

RootResult route_a_xi(const CoarseModel& clump, double beta_g) {
    return leftmost_root([&](double s) { return progeny_pgf(clump, std::exp(-beta_g * (1.0 - s))); });
}

FixedPointSolution solve_branch_transforms(const FineLibrary& lib, double nu, const SolverOptions& opts) {
    const auto T = static_cast<std::size_t>(lib.dim());
    std::vector<Compiled> src;
    for (std::size_t t = 0; t < T; ++t) src.push_back(compile(lib.mover(static_cast<int>(t)), nu));
    FixedPointSolution fp;
    fp.x.assign(T, 0.0);
    std::vector<double> next(T);
    for (fp.iterations = 1; fp.iterations <= opts.max_iter; ++fp.iterations) {
        double change = 0.0;
        if (opts.gauss_seidel) {
            for (std::size_t t = 0; t < T; ++t) {
                const double v = src[t].eval(fp.x);
                change = std::max(change, std::abs(v - fp.x[t]));
                fp.x[t] = v;
            }
        } else {
            for (std::size_t t = 0; t < T; ++t) next[t] = src[t].eval(fp.x);
            for (std::size_t t = 0; t < T; ++t) change = std::max(change, std::abs(next[t] - fp.x[t]));
            fp.x.swap(next);
        }
        if (change < opts.tol) {
            fp.converged = true;
            break;
        }
    }
    fp.iterations = std::min(fp.iterations, opts.max_iter);
    for (std::size_t t = 0; t < T; ++t) fp.residual = std::max(fp.residual, std::abs(src[t].eval(fp.x) - fp.x[t]));
    return fp;
}

double phi_A(const ModelParams& params, const FineLibrary& lib, double nu, const SolverOptions& opts, bool unprimed,
             FixedPointSolution* fixed) {
    const int h = params.h, w = params.w();
    auto fp = solve_branch_transforms(lib, nu, opts);
    const auto omega = seed_contact_weights(params, nu, unprimed);
    auto om = [&](int j, int l) { return omega[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]; };

    double phi_m = 0.0;
    if (params.theta > 0.0) {
        auto xh = [&](int q) { return q == 0 ? 1.0 : fp.x[static_cast<std::size_t>(q - 1)]; };
        auto xw = [&](int r) { return r == 0 ? 1.0 : fp.x[static_cast<std::size_t>(h - 2 + r)]; };
        for (int q = 0; q < h; ++q)
            for (int r = 0; r < w; ++r) phi_m += om(q, r) * xh(q) * xw(r);
    }
    double phi_r = om(0, 0);
    for (int j = 0; j < h; ++j)
        for (int l = 0; l < w; ++l) {
            if (j == 0 && l == 0) continue;
            const double o = om(j, l);
            if (o == 0.0) continue;
            phi_r += o * compile(lib.remainer(j, l), nu).eval(fp.x);
        }
    if (fixed) *fixed = std::move(fp);
    return params.theta * phi_m + (1.0 - params.theta) * phi_r;
}

RouteBSolution route_b(const ModelParams& params, const FineLibrary& lib, const SolverOptions& opts, bool unprimed) {
    RouteBSolution out;
    const double bg = params.rates.beta_g;
    const auto root = leftmost_root([&](double s) {
        FixedPointSolution fp;
        const double v = phi_A(params, lib, bg * (1.0 - s), opts, unprimed, &fp);
        out.max_residual = std::max(out.max_residual, fp.residual);
        out.converged = out.converged && fp.converged;
        return v;
    });
    out.xi = root.xi;
    out.evaluations = root.evaluations;
    return out;
}

PiG0Solution solve_pi_g0(const ModelParams& params, const CoarseModel& susset, const FineLibrary& lib,
                         const SolverOptions& opts, bool unprimed) {
    if (params.theta <= 0.0) throw ConfigError("the local-only analysis needs theta > 0");
    PiG0Solution out;
    out.eta_s = solve_progeny_pair(susset[SeedType::H], susset[SeedType::W], 1.0, opts);
    const double eh = out.eta_s.h, ew = out.eta_s.w;
    const double th = params.theta;
    out.z = std::max(0.0, 1.0 - ((1.0 - th) * susset[SeedType::R](1.0, eh, ew) + th * eh * ew));
    FixedPointSolution fp;
    out.rho = std::max(0.0, 1.0 - phi_A(params, lib, 0.0, opts, unprimed, &fp));
    out.eta_c = fp.x;
    out.residual = std::max(out.eta_s.residual, fp.residual);
    out.iterations = out.eta_s.iterations + fp.iterations;
    return out;
}

ExactMode parse_exact_mode(const std::string& text) {
    if (text == "auto") return ExactMode::automatic;
    if (text == "force") return ExactMode::force;
    if (text == "off") return ExactMode::off;
    throw ConfigError("--exact must be auto, force or off, got '" + text + "'");
}

bool use_exact_tables(const ModelParams& params, ExactMode mode) {
    const bool constant = params.infectious_period.is_constant();
    if (mode == ExactMode::force && !constant) throw ConfigError("exact tables need a constant infectious period");
    return mode != ExactMode::off && constant;
}

AnalyticsReport analyze(const ModelParams& params, const AnalyzeOptions& opts) {
    params.validate();
    AnalyticsReport rep;
    const bool exact = use_exact_tables(params, opts.exact);
    rep.exact_tables = exact;
    rep.n_mc = exact ? 0 : opts.n_mc;
    rep.seed = opts.seed;
    const double th = params.theta, bg = params.rates.beta_g;
    const auto& so = opts.solver;

    const auto sus = build_tables(params, TableKind::susset, exact, opts.n_mc, opts.seed, opts.replicates);
    std::tie(rep.R_L, rep.R_L_se) =
        with_stderr(sus, th, [](const CoarseModel& m) { return compute_R_L(mean_matrix(m)); });
    std::tie(rep.R_star, rep.R_star_se) =
        with_stderr(sus, th, [&](const CoarseModel& m) { return compute_R_star(m, bg); });
    const auto full = model_of(sus, -1, th);

    auto library = [&] {
        rep.n_lib = opts.n_lib;
        return build_fine_libraries(params, opts.n_lib, opts.seed, opts.replicates);
    };

    if (bg > 0.0) {
        const auto zs = solve_final_size_z(full, bg, so);
        rep.z = zs.z;
        rep.z_residual = zs.residual;
        rep.near_critical = zs.near_critical;
        rep.converged = !zs.bracket_failed;
        rep.z_se = with_stderr(sus, th, [&](const CoarseModel& m) { return solve_final_size_z(m, bg, so).z; }).second;
        PairSolution pair;
        (void)progeny_pgf(full, std::exp(-bg * rep.z), so, &pair);
        rep.pair_iterations = pair.iterations;
        rep.pair_residual = pair.residual;
        if (!opts.want_rho) return rep;

        const bool constant = params.infectious_period.is_constant();
        if (constant) {
            const auto clump =
                exact ? sus : build_tables(params, TableKind::clump, false, opts.n_mc, opts.seed, opts.replicates);
            const auto [xi, xi_se] =
                with_stderr(clump, th, [&](const CoarseModel& m) { return route_a_xi(m, bg).xi; });
            rep.xi = xi;
            rep.rho = 1.0 - xi;
            rep.rho_se = xi_se;
            rep.rho_route = "A";
            rep.rho_route_a = rep.rho;
        }
        if (!constant || opts.both_routes) {
            const auto libs = library();
            const auto b = route_b(params, libs.full, so, opts.unprimed_seed_rates);
            std::vector<double> reps;
            for (const auto& part : libs.parts)
                reps.push_back(1.0 - route_b(params, part, so, opts.unprimed_seed_rates).xi);
            rep.rho_route_b = 1.0 - b.xi;
            rep.rho_route_b_se = replicate_stats(reps).second;
            rep.fixed_point_residual = b.max_residual;
            rep.converged = rep.converged && b.converged;
            if (!constant) {
                rep.xi = b.xi;
                rep.rho = rep.rho_route_b;
                rep.rho_se = rep.rho_route_b_se;
                rep.rho_route = "B";
            }
        }
        return rep;
    }

    if (th <= 0.0) {
        rep.z = 0.0;
        if (opts.want_rho) {
            rep.rho = 0.0;
            rep.rho_se = 0.0;
            rep.rho_route = "none";
        }
        return rep;
    }
    const auto eta = solve_progeny_pair(full[SeedType::H], full[SeedType::W], 1.0, so);
    rep.eta_s_h = eta.h;
    rep.eta_s_w = eta.w;
    rep.pair_iterations = eta.iterations;
    rep.pair_residual = eta.residual;
    rep.converged = eta.converged;
    auto z_of = [&](const CoarseModel& m) {
        const auto e = solve_progeny_pair(m[SeedType::H], m[SeedType::W], 1.0, so);
        return std::max(0.0, 1.0 - ((1.0 - th) * m[SeedType::R](1.0, e.h, e.w) + th * e.h * e.w));
    };
    std::tie(rep.z, rep.z_se) = with_stderr(sus, th, z_of);
    if (!opts.want_rho) return rep;
    const auto libs = library();
    const auto sol = solve_pi_g0(params, full, libs.full, so, opts.unprimed_seed_rates);
    std::vector<double> reps;
    for (const auto& part : libs.parts) reps.push_back(solve_pi_g0(params, full, part, so, opts.unprimed_seed_rates).rho);
    rep.rho = sol.rho;
    rep.rho_se = replicate_stats(reps).second;
    rep.xi = 1.0 - sol.rho;
    rep.eta_c = sol.eta_c;
    rep.rho_route = "local";
    rep.fixed_point_residual = sol.residual;
    return rep;
}

void write_report_csv(const AnalyticsReport& r, std::ostream& out) {
    out << kSchemaLine << '\n' << "quantity,value,stderr\n";
    auto row = [&](const std::string& q, double v, double se) { out << q << ',' << fmt(v) << ',' << fmt(se) << '\n'; };
    row("R_L", r.R_L, r.R_L_se);
    row("R_star", r.R_star, r.R_star_se);
    row("z", r.z, r.z_se);
    if (r.rho) row("rho", *r.rho, r.rho_se.value_or(0.0));
    if (r.xi) row("xi", *r.xi, r.rho_se.value_or(0.0));
    if (r.rho_route_a) row("rho_route_a", *r.rho_route_a, r.rho_se.value_or(0.0));
    if (r.rho_route_b) row("rho_route_b", *r.rho_route_b, r.rho_route_b_se.value_or(0.0));
    row("eta_s_h", r.eta_s_h, 0.0);
    row("eta_s_w", r.eta_s_w, 0.0);
    for (std::size_t t = 0; t < r.eta_c.size(); ++t) row("eta_c_" + std::to_string(t), r.eta_c[t], 0.0);
    row("z_residual", r.z_residual, 0.0);
    row("pair_residual", r.pair_residual, 0.0);
    row("pair_iterations", static_cast<double>(r.pair_iterations), 0.0);
    row("fixed_point_residual", r.fixed_point_residual, 0.0);
    row("near_critical", r.near_critical ? 1.0 : 0.0, 0.0);
    row("converged", r.converged ? 1.0 : 0.0, 0.0);
    row("exact_tables", r.exact_tables ? 1.0 : 0.0, 0.0);
    row("n_mc", static_cast<double>(r.n_mc), 0.0);
    row("n_lib", static_cast<double>(r.n_lib), 0.0);
    out << "seed," << r.seed << ",0\n";
}

}  // namespace hwepi
