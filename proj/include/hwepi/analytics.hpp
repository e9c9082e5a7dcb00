#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hwepi/fine_library.hpp"
#include "hwepi/model.hpp"
#include "hwepi/tables.hpp"

namespace hwepi {

struct SolverOptions {
    double tol = 1e-12;
    std::int64_t max_iter = 100000;
    bool gauss_seidel = false;
};

struct PairSolution {
    double h = 0.0;
    double w = 0.0;
    std::int64_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Smallest solution of (x, y) = (s g_H(s,x,y), s g_W(s,x,y)) by monotone iteration from (0,0).
PairSolution solve_progeny_pair(const OffspringPgf& g_h, const OffspringPgf& g_w, double s,
                                const SolverOptions& opts = {});

/// The three offspring PGFs of one table set plus the mover probability.
struct CoarseModel {
    std::array<OffspringPgf, 3> g;
    double theta = 0.0;

    static CoarseModel from(const std::array<JointPmf3, 3>& pmf, double theta);
    [[nodiscard]] const OffspringPgf& operator[](SeedType x) const { return g[static_cast<std::size_t>(x)]; }
};

/// Total-progeny PGF (1-theta) s g_R(s, fH, fW) + theta g_H(s, fH, fW) fW.
/// Gives f_S on susceptibility tables and f_C on clump tables.
double progeny_pgf(const CoarseModel& m, double s, const SolverOptions& opts = {}, PairSolution* pair = nullptr);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// [[mu_HH, mu_HW], [mu_WH, mu_WW]]; zero when theta = 0 (no movers).
Matrix2 mean_matrix(const CoarseModel& m);
/// Perron root of a nonnegative 2x2 matrix.
double compute_R_L(const Matrix2& m);
/// beta_G E[S]; +infinity when R_L >= 1.
double compute_R_star(const CoarseModel& m, double beta_g);

struct FinalSizeSolution {
    double z = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool near_critical = false;
    bool bracket_failed = false;
};

/// Root of 1 - z = f_S(exp(-beta_G z)) in (0,1]; zero when R* <= 1.
FinalSizeSolution solve_final_size_z(const CoarseModel& susset, double beta_g, const SolverOptions& opts = {});

struct RootResult {
    double xi = 1.0;
    int evaluations = 0;
};

/// Leftmost root in [0,1] of G(s) = s for a PGF-like G with G(0) > 0: scans
/// s = 0, 1/2, 3/4, ... toward 1 for the first sign change, then bisects to `tol`.
RootResult leftmost_root(const std::function<double(double)>& g, double tol = 1e-12);

/// xi from f_C(exp(-beta_G (1 - s))) = s.
RootResult route_a_xi(const CoarseModel& clump, double beta_g);

struct FixedPointSolution {
    std::vector<double> x;
    std::int64_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Smallest fixed point x_t = sum over library draws of e^{-nu A} prod x^Z for the
/// mover fine types t; nu = 0 gives the clump extinction probabilities.
FixedPointSolution solve_branch_transforms(const FineLibrary& lib, double nu, const SolverOptions& opts = {});

/// theta phi_M(nu) + (1-theta) phi_R(nu).
double phi_A(const ModelParams& params, const FineLibrary& lib, double nu, const SolverOptions& opts = {},
             bool unprimed = false, FixedPointSolution* fixed = nullptr);

struct RouteBSolution {
    double xi = 1.0;
    int evaluations = 0;
    double max_residual = 0.0;
    bool converged = true;
};
RouteBSolution route_b(const ModelParams& params, const FineLibrary& lib, const SolverOptions& opts = {},
                       bool unprimed = false);

struct PiG0Solution {
    PairSolution eta_s;
    std::vector<double> eta_c;
    double z = 0.0;
    double rho = 0.0;
    double residual = 0.0;
    std::int64_t iterations = 0;
};
/// Local-only epidemic: z from the susceptibility tables, rho from the fine clump library.
PiG0Solution solve_pi_g0(const ModelParams& params, const CoarseModel& susset, const FineLibrary& lib,
                         const SolverOptions& opts = {}, bool unprimed = false);

enum class ExactMode { automatic, force, off };
ExactMode parse_exact_mode(const std::string& text);

struct AnalyzeOptions {
    std::int64_t n_mc = 1000000;
    std::int64_t n_lib = 200000;
    std::uint64_t seed = 1;
    ExactMode exact = ExactMode::automatic;
    int replicates = 10;
    SolverOptions solver;
    bool unprimed_seed_rates = false;
    bool want_rho = true;
    /// Also compute the other rho route when both apply (constant I, beta_G > 0).
    bool both_routes = false;
};

struct AnalyticsReport {
    double R_L = 0.0, R_L_se = 0.0;
    double R_star = 0.0, R_star_se = 0.0;
    double z = 0.0, z_se = 0.0;
    std::optional<double> rho, rho_se, xi;
    std::string rho_route;
    std::optional<double> rho_route_a, rho_route_b, rho_route_b_se;
    double eta_s_h = 1.0, eta_s_w = 1.0;
    std::vector<double> eta_c;
    double z_residual = 0.0;
    double pair_residual = 0.0;
    std::int64_t pair_iterations = 0;
    double fixed_point_residual = 0.0;
    bool near_critical = false;
    bool converged = true;
    bool exact_tables = false;
    std::int64_t n_mc = 0;
    std::int64_t n_lib = 0;
    std::uint64_t seed = 0;
};

/// True when exact tables are used under `mode` for these parameters.
bool use_exact_tables(const ModelParams& params, ExactMode mode);

AnalyticsReport analyze(const ModelParams& params, const AnalyzeOptions& opts);

/// Mean and standard error (sd / sqrt(K)) of replicate values.
std::pair<double, double> replicate_stats(const std::vector<double>& values);

/// CSV with columns quantity,value,stderr.
void write_report_csv(const AnalyticsReport& r, std::ostream& out);

}  // namespace hwepi
