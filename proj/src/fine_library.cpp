#include "hwepi/fine_library.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>

#include "hwepi/complex_structure.hpp"
#include "hwepi/csv.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/fine_types.hpp"
#include "hwepi/within_complex.hpp"

namespace hwepi {
namespace {

using Key = std::vector<std::pair<int, int>>;

struct Bucket {
    std::vector<std::pair<double, double>> draws;  // (severity, weight)
};

FineLibrary::Entry finish(const Key& key, std::vector<std::pair<double, double>> draws) {
    std::sort(draws.begin(), draws.end());
    FineLibrary::Entry e;
    e.z = key;
    for (const auto& [a, wt] : draws) {
        if (!e.severity.empty() && e.severity.back() == a) {
            e.weight.back() += wt;
        } else {
            e.severity.push_back(a);
            e.weight.push_back(wt);
        }
    }
    return e;
}

FineLibrary::Source to_source(const std::map<Key, Bucket>& buckets, std::int64_t draws) {
    FineLibrary::Source s;
    s.draws = draws;
    for (const auto& [key, b] : buckets) s.entries.push_back(finish(key, b.draws));
    return s;
}

Key sparse(const std::vector<int>& fine) {
    Key k;
    for (std::size_t t = 0; t < fine.size(); ++t)
        if (fine[t] > 0) k.emplace_back(static_cast<int>(t), fine[t]);
    return k;
}

}  // namespace

double FineLibrary::Source::total_weight() const {
    double t = 0.0;
    for (const auto& e : entries)
        for (double w : e.weight) t += w;
    return t;
}

std::int64_t FineLibrary::draws() const {
    std::int64_t n = 0;
    for (const auto& s : mover_) n += s.draws;
    for (const auto& s : remainer_) n += s.draws;
    return n;
}

FineLibrary FineLibrary::build(const ModelParams& params, std::int64_t n_lib, SeedSpec seed, std::int64_t min_draws) {
    params.validate();
    if (n_lib < 1) throw ConfigError("library size must be positive");
    FineLibrary lib;
    lib.h_ = params.h;
    lib.w_ = params.w();
    const int h = lib.h_, w = lib.w_, T = lib.dim();

    struct Job {
        int source;  // < T: mover fine type; else T + j*w + l
        SeedType x;
        SeedConstraint c;
        std::int64_t n;
    };
    std::vector<Job> jobs;
    for (int t = 0; t < T; ++t) {
        const bool house = t < h - 1;
        const int l = house ? t + 1 : t - (h - 1) + 1;
        jobs.push_back({t, house ? SeedType::H : SeedType::W, SeedConstraint::exactly(l), n_lib});
    }
    const auto omega = seed_contact_weights(params, 0.0);
    for (int j = 0; j < h; ++j)
        for (int l = 0; l < w; ++l) {
            if (j == 0 && l == 0) continue;
            const double p = omega[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
            const auto n = std::max<std::int64_t>(min_draws, std::llround(static_cast<double>(n_lib) * p));
            jobs.push_back({T + j * w + l, SeedType::R, SeedConstraint::remainer(j, l), n});
        }

    // One task per (source, structure); results are merged in task order.
    struct Task {
        std::size_t job;
        WeightedStructure ws;
        std::int64_t n;
    };
    std::vector<Task> tasks;
    std::array<std::vector<WeightedStructure>, 3> structures;
    for (SeedType x : {SeedType::R, SeedType::H, SeedType::W})
        structures[static_cast<std::size_t>(x)] = enumerate_structures(h, params.d, x, params.theta);
    for (std::size_t j = 0; j < jobs.size(); ++j)
        for (const auto& ws : structures[static_cast<std::size_t>(jobs[j].x)])
            tasks.push_back({j, ws, std::max<std::int64_t>(1, std::llround(static_cast<double>(jobs[j].n) * ws.weight))});

    std::vector<std::map<Key, Bucket>> results(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(tasks.size()); ++ti) {
        const auto& task = tasks[static_cast<std::size_t>(ti)];
        const auto& job = jobs[task.job];
        ComplexSampler sampler(task.ws.structure, params);
        Rng rng(seed.child(static_cast<std::uint64_t>(job.source)).child(static_cast<std::uint64_t>(ti)));
        const double wt = task.ws.weight / static_cast<double>(task.n);
        auto& out = results[static_cast<std::size_t>(ti)];
        WithinComplexOutcome o;
        for (std::int64_t i = 0; i < task.n; ++i) {
            sampler.clump(rng, job.c, true, o);
            out[sparse(o.fine)].draws.emplace_back(o.severity, wt);
        }
    }

    std::vector<std::map<Key, Bucket>> merged(jobs.size());
    std::vector<std::int64_t> counts(jobs.size(), 0);
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        auto& dst = merged[tasks[ti].job];
        counts[tasks[ti].job] += tasks[ti].n;
        for (auto& [key, b] : results[ti]) {
            auto& d = dst[key].draws;
            d.insert(d.end(), b.draws.begin(), b.draws.end());
        }
    }
    lib.mover_.resize(static_cast<std::size_t>(T));
    lib.remainer_.resize(static_cast<std::size_t>(h * w));
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto src = to_source(merged[j], counts[j]);
        if (jobs[j].source < T)
            lib.mover_[static_cast<std::size_t>(jobs[j].source)] = std::move(src);
        else
            lib.remainer_[static_cast<std::size_t>(jobs[j].source - T)] = std::move(src);
    }
    return lib;
}

FineLibrary FineLibrary::merge(const std::vector<FineLibrary>& parts) {
    if (parts.empty()) throw ConfigError("nothing to merge");
    FineLibrary out;
    out.h_ = parts.front().h_;
    out.w_ = parts.front().w_;
    const double scale = 1.0 / static_cast<double>(parts.size());
    auto combine = [&](auto member) {
        const std::size_t count = (parts.front().*member).size();
        std::vector<Source> res(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::map<Key, Bucket> buckets;
            std::int64_t draws = 0;
            for (const auto& p : parts) {
                const auto& src = (p.*member)[i];
                draws += src.draws;
                for (const auto& e : src.entries) {
                    auto& d = buckets[e.z].draws;
                    for (std::size_t k = 0; k < e.severity.size(); ++k) d.emplace_back(e.severity[k], e.weight[k] * scale);
                }
            }
            res[i] = to_source(buckets, draws);
        }
        return res;
    };
    out.mover_ = combine(&FineLibrary::mover_);
    out.remainer_ = combine(&FineLibrary::remainer_);
    return out;
}

void FineLibrary::write_csv(std::ostream& out) const {
    out << kSchemaLine << '\n' << "seed_type,l,y,k,count_mean,severity_mean,draws,j\n";
    auto emit = [&](char type, int j, int l, const Source& src) {
        const double tw = src.total_weight();
        if (tw <= 0.0) return;
        std::vector<double> mean(static_cast<std::size_t>(dim()), 0.0);
        double sev = 0.0;
        for (const auto& e : src.entries)
            for (std::size_t k = 0; k < e.weight.size(); ++k) {
                sev += e.weight[k] * e.severity[k];
                for (const auto& [t, c] : e.z) mean[static_cast<std::size_t>(t)] += e.weight[k] * c;
            }
        for (int t = 0; t < dim(); ++t) {
            const bool house = t < h_ - 1;
            const int k = house ? t + 1 : t - (h_ - 1) + 1;
            out << type << ',' << l << ',' << (house ? 'H' : 'W') << ',' << k << ','
                << fmt(mean[static_cast<std::size_t>(t)] / tw) << ',' << fmt(sev / tw) << ',' << src.draws << ','
                << j << '\n';
        }
    };
    for (int t = 0; t < dim(); ++t) {
        const bool house = t < h_ - 1;
        emit(house ? 'H' : 'W', 0, house ? t + 1 : t - (h_ - 1) + 1, mover_[static_cast<std::size_t>(t)]);
    }
    for (int j = 0; j < h_; ++j)
        for (int l = 0; l < w_; ++l)
            if (j || l) emit('R', j, l, remainer(j, l));
}

FineLibrarySet build_fine_libraries(const ModelParams& params, std::int64_t n_lib, std::uint64_t seed,
                                    int replicates) {
    if (replicates < 1) throw ConfigError("need at least one replicate");
    FineLibrarySet set;
    const std::int64_t per = std::max<std::int64_t>(1, n_lib / replicates);
    const SeedSpec root{seed, 0xf17eULL};
    for (int r = 0; r < replicates; ++r)
        set.parts.push_back(FineLibrary::build(params, per, root.child(static_cast<std::uint64_t>(r))));
    set.full = FineLibrary::merge(set.parts);
    return set;
}

}  // namespace hwepi
