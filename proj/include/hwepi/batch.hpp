#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hwepi/epidemic.hpp"

namespace hwepi {

struct RunRecord {
    std::int64_t run = 0;
    std::int64_t final_size = 0;
    double severity = 0.0;
    PersonId initial = 0;
};

struct BatchOptions {
    std::int64_t sims = 1;
    std::uint64_t seed = 0;
    /// Fresh population per run; when false one population (drawn from the
    /// batch seed) is shared by all runs.
    bool fresh_network = true;
    std::optional<PersonId> initial;  ///< empty = uniform initial infective
    std::int64_t first_run = 0;       ///< run indices are first_run, first_run+1, ...
};

/// Run k uses stream k for both its population and its epidemic, so the
/// returned records do not depend on the number of worker threads.
std::vector<RunRecord> run_batch(const ModelParams& params, const BatchOptions& opts);
std::vector<RunRecord> run_batch_serial(const ModelParams& params, const BatchOptions& opts);

/// Seeds of run k; exposed so tests can rebuild a single run.
SeedSpec population_seed(std::uint64_t base, std::int64_t run, bool fresh_network);
SeedSpec epidemic_seed(std::uint64_t base, std::int64_t run);

struct Estimate {
    double value = 0.0;
    double half_width = 0.0;  ///< half-width of the approximate 95% interval
    [[nodiscard]] double lo() const { return value - half_width; }
    [[nodiscard]] double hi() const { return value + half_width; }
    [[nodiscard]] bool covers(double x) const { return lo() <= x && x <= hi(); }
};

struct BatchSummary {
    std::int64_t n = 0;
    std::int64_t cutoff = 1;
    std::int64_t runs = 0;
    std::int64_t major = 0;
    std::int64_t minor = 0;
    Estimate rho;
    std::optional<Estimate> z;  ///< undefined without major outbreaks
    double sigma = 0.0;         ///< sample sd of Z/n among majors (0 if fewer than 2)
};

/// Major means final size >= cutoff.
BatchSummary estimate_rho_z(std::span<const std::int64_t> final_sizes, std::int64_t n, std::int64_t cutoff);

/// ceil(log n): final size >= this is the same as final size > log n.
std::int64_t default_cutoff(std::int64_t n);

/// Runs consecutive run indices (in parallel chunks) until `target` runs reach
/// the cutoff, and returns the first `target` of them in run order, so the
/// result is independent of chunking and thread count.
std::vector<RunRecord> collect_major_runs(const ModelParams& params, std::int64_t target, std::int64_t cutoff,
                                          std::uint64_t seed, bool fresh_network = true,
                                          std::int64_t max_runs = 100'000'000);

std::vector<std::int64_t> final_sizes(std::span<const RunRecord> records);

}  // namespace hwepi
