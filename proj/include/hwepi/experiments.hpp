#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hwepi/analytics.hpp"
#include "hwepi/batch.hpp"
#include "hwepi/model.hpp"

namespace hwepi {

/// Default setting of the histogram and convergence experiments:
/// h = 4, d = 1, beta = 3, pi_G = 0.025, pi_H|G^c = 0.5, I = 1.
ModelParams default_outbreak_params();
/// Default setting of the theta sweep: h = 3, otherwise as above.
ModelParams default_sweep_params();

/// Parses "a:step:b" (inclusive, rounded to the step grid) or a comma list.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

struct SweepOptions {
    std::vector<double> thetas;
    std::vector<int> ds{1, 2, 3, 4};
    std::vector<std::string> laws{"constant"};
    std::int64_t n_mc = 1000000;
    std::uint64_t seed = 1;
    ExactMode exact = ExactMode::automatic;
    int replicates = 10;
    /// Library size for rho when I is not constant; 0 leaves rho empty for those laws.
    std::int64_t n_lib = 0;
    SolverOptions solver;
};

struct SweepRow {
    double theta = 0.0;
    int d = 1;
    std::string ip_law;
    double R_L = 0.0, R_L_se = 0.0;
    double R_star = 0.0, R_star_se = 0.0;
    double z = 0.0, z_se = 0.0;
    double rho = 0.0;
    double residual = 0.0;
    std::int64_t n_mc = 0;
};

/// z, R* and R_L on a theta grid. Tables for one (d, law) come from one set of
/// per-structure banks, so neighbouring grid points share their random draws.
std::vector<SweepRow> run_sweep(const ModelParams& base, const SweepOptions& opts);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Interpolated theta where R* crosses 1 along one (d, law) curve; NaN if it never does.
double critical_theta(const std::vector<SweepRow>& rows, int d, const std::string& law);

/// Histogram CSV of final sizes: columns theta,n,final_size,fraction,count.
void write_histogram_csv(const std::vector<RunRecord>& runs, double theta, std::int64_t n, std::ostream& out);

struct Fig1Options {
    std::int64_t sims = 10000;
    std::uint64_t seed = 1;
};
/// The four histogram panels: (theta, n) = (0.075, 1000), (0.4, 1000), (0.4, 600), (0.4, 200).
std::vector<std::filesystem::path> figure1(const ModelParams& base, const Fig1Options& opts,
                                           const std::filesystem::path& out_dir);

/// Hand-chosen major/minor cutoffs per (n, d) of the convergence study.
std::map<std::pair<std::int64_t, int>, std::int64_t> fig2_cutoffs();
std::map<std::pair<std::int64_t, int>, std::int64_t> read_cutoffs_csv(std::istream& in);
void write_cutoffs_csv(const std::map<std::pair<std::int64_t, int>, std::int64_t>& cutoffs, std::ostream& out);

/// Population sizes of the convergence study for workplace size w (adjusted down to a multiple of w).
std::vector<std::int64_t> fig2_sizes(int h, int d);

struct Fig2Options {
    std::vector<int> ds{1, 2, 3};
    std::vector<std::int64_t> sizes;  ///< empty = the study grid
    std::int64_t sims = 10000;        ///< runs for rho-hat
    std::int64_t majors = 2000;       ///< major outbreaks for z-hat
    std::uint64_t seed = 1;
    std::map<std::pair<std::int64_t, int>, std::int64_t> cutoffs;  ///< empty = built-in table
    AnalyzeOptions analytics;
};

struct Fig2Row {
    std::int64_t n = 0;
    int d = 1;
    std::int64_t cutoff = 1;
    BatchSummary rho_batch;
    BatchSummary z_batch;
    double rho = 0.0;
    double z = 0.0;
};
std::vector<Fig2Row> run_figure2(const ModelParams& base, const Fig2Options& opts);
void write_fig2_csv(const std::vector<Fig2Row>& rows, std::ostream& out);

}  // namespace hwepi
