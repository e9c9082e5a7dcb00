#include "hwepi/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwepi/errors.hpp"

namespace hwepi {
namespace {

constexpr std::uint64_t kPopulationTag = 0;
constexpr std::uint64_t kEpidemicTag = 1;
constexpr std::uint64_t kSharedNetworkStream = std::numeric_limits<std::uint64_t>::max();

RunRecord one_run(const ModelParams& params, const BatchOptions& opts, const Population* shared, std::int64_t k) {
    const auto eseed = epidemic_seed(opts.seed, k);
    Outcome out;
    if (shared) {
        out = simulate_final(*shared, params, eseed, opts.initial);
    } else {
        const auto pop = generate_population(params, population_seed(opts.seed, k, true));
        out = simulate_final(pop, params, eseed, opts.initial);
    }
    return RunRecord{k, out.final_size, out.severity, out.initial};
}

void check(const ModelParams& params, const BatchOptions& opts) {
    params.validate();
    if (params.n <= 0) throw ConfigError("simulation needs a population size n");
    if (opts.sims < 0) throw ConfigError("number of simulations must be nonnegative");
}

}  // namespace

SeedSpec population_seed(std::uint64_t base, std::int64_t run, bool fresh_network) {
    const std::uint64_t stream = fresh_network ? static_cast<std::uint64_t>(run) : kSharedNetworkStream;
    return SeedSpec{base, stream}.child(kPopulationTag);
}

SeedSpec epidemic_seed(std::uint64_t base, std::int64_t run) {
    return SeedSpec{base, static_cast<std::uint64_t>(run)}.child(kEpidemicTag);
}

std::vector<RunRecord> run_batch(const ModelParams& params, const BatchOptions& opts) {
    check(params, opts);
    std::optional<Population> shared;
    if (!opts.fresh_network) shared = generate_population(params, population_seed(opts.seed, 0, false));
    const Population* sp = shared ? &*shared : nullptr;
    std::vector<RunRecord> out(static_cast<std::size_t>(opts.sims));
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < opts.sims; ++i)
        out[static_cast<std::size_t>(i)] = one_run(params, opts, sp, opts.first_run + i);
    return out;
}

std::vector<RunRecord> run_batch_serial(const ModelParams& params, const BatchOptions& opts) {
    check(params, opts);
    std::optional<Population> shared;
    if (!opts.fresh_network) shared = generate_population(params, population_seed(opts.seed, 0, false));
    std::vector<RunRecord> out;
    out.reserve(static_cast<std::size_t>(opts.sims));
    for (std::int64_t i = 0; i < opts.sims; ++i)
        out.push_back(one_run(params, opts, shared ? &*shared : nullptr, opts.first_run + i));
    return out;
}

BatchSummary estimate_rho_z(std::span<const std::int64_t> final_sizes, std::int64_t n, std::int64_t cutoff) {
    if (cutoff < 1) throw ConfigError("cutoff must be at least 1");
    if (n < 1) throw ConfigError("population size must be positive");
    BatchSummary s;
    s.n = n;
    s.cutoff = cutoff;
    s.runs = static_cast<std::int64_t>(final_sizes.size());
    double sum = 0.0;
    for (auto z : final_sizes) {
        if (z >= cutoff) {
            ++s.major;
            sum += static_cast<double>(z) / static_cast<double>(n);
        }
    }
    s.minor = s.runs - s.major;
    if (s.runs > 0) {
        const double r = static_cast<double>(s.major) / static_cast<double>(s.runs);
        s.rho = {r, 1.96 * std::sqrt(r * (1.0 - r) / static_cast<double>(s.runs))};
    }
    if (s.major > 0) {
        const double mean = sum / static_cast<double>(s.major);
        double ss = 0.0;
        for (auto z : final_sizes) {
            if (z < cutoff) continue;
            const double dev = static_cast<double>(z) / static_cast<double>(n) - mean;
            ss += dev * dev;
        }
        s.sigma = s.major > 1 ? std::sqrt(ss / static_cast<double>(s.major - 1)) : 0.0;
        s.z = Estimate{mean, 1.96 * s.sigma / std::sqrt(static_cast<double>(s.major))};
    }
    return s;
}

std::int64_t default_cutoff(std::int64_t n) {
    if (n < 1) throw ConfigError("population size must be positive");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(n)))));
}

std::vector<RunRecord> collect_major_runs(const ModelParams& params, std::int64_t target, std::int64_t cutoff,
                                          std::uint64_t seed, bool fresh_network, std::int64_t max_runs) {
    std::vector<RunRecord> majors;
    BatchOptions opts;
    opts.seed = seed;
    opts.fresh_network = fresh_network;
    std::int64_t next = 0;
    while (static_cast<std::int64_t>(majors.size()) < target) {
        if (next >= max_runs) throw NumericalError("too few major outbreaks within the run budget");
        const std::int64_t remaining = target - static_cast<std::int64_t>(majors.size());
        opts.first_run = next;
        opts.sims = std::min(max_runs - next, std::max<std::int64_t>(256, 2 * remaining));
        for (const auto& r : run_batch(params, opts)) {
            if (r.final_size >= cutoff && static_cast<std::int64_t>(majors.size()) < target) majors.push_back(r);
        }
        next += opts.sims;
    }
    return majors;
}

std::vector<std::int64_t> final_sizes(std::span<const RunRecord> records) {
    std::vector<std::int64_t> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.final_size);
    return out;
}

}  // namespace hwepi
