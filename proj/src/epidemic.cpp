#include "hwepi/epidemic.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "hwepi/errors.hpp"

namespace hwepi {
namespace {

constexpr std::uint64_t kInitialTag = std::numeric_limits<std::uint64_t>::max();

// Calls on_edge(v) for every local out-edge of u; returns I_u. Consumes the
// stream in the documented order so that callers see identical graphs.
template <typename OnEdge>
double draw_local(const Population& pop, const ModelParams& params, Rng& rng, PersonId u, OnEdge&& on_edge) {
    const double I = params.infectious_period.sample(rng);
    const double bh = params.beta_h_pair();
    const double bw = params.beta_w_pair();
    const double p_h = -std::expm1(-bh * I);
    const double p_w = -std::expm1(-bw * I);
    const double p_hw = -std::expm1(-(bh + bw) * I);

    const PersonId wp = pop.final_workplace(u);
    const PersonId hb = pop.household_begin(u);
    for (PersonId v = hb; v < hb + pop.h(); ++v) {
        if (v == u) continue;
        const double p = pop.final_workplace(v) == wp ? p_hw : p_h;
        if (rng.uniform() < p) on_edge(v);
    }
    const PersonId hh = pop.household(u);
    for (PersonId v : pop.workplace_members(wp)) {
        if (v == u || pop.household(v) == hh) continue;
        if (rng.uniform() < p_w) on_edge(v);
    }
    return I;
}

// Unit-rate points on [0, beta_G * I]; a larger beta_G keeps every earlier point.
template <typename OnContact>
void draw_global(const Population& pop, const ModelParams& params, Rng& rng, double I, OnContact&& on_contact) {
    const double horizon = params.rates.beta_g * I;
    if (!(horizon > 0.0)) return;
    const auto n = static_cast<std::uint64_t>(pop.size());
    double t = rng.exponential();
    while (t <= horizon) {
        on_contact(static_cast<PersonId>(rng.below(n)));
        t += rng.exponential();
    }
}

std::vector<std::vector<PersonId>> realize_local_graph(const Population& pop, const ModelParams& params,
                                                       SeedSpec seed) {
    const auto n = static_cast<std::size_t>(pop.size());
    std::vector<std::vector<PersonId>> out(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(n); ++u) {
        Rng rng(seed.child(static_cast<std::uint64_t>(u)));
        auto& adj = out[static_cast<std::size_t>(u)];
        draw_local(pop, params, rng, static_cast<PersonId>(u), [&](PersonId v) { adj.push_back(v); });
    }
    return out;
}

std::int64_t reach_count(const std::vector<std::vector<PersonId>>& adj, PersonId start,
                         std::vector<std::uint32_t>& mark, std::uint32_t stamp, std::vector<PersonId>& stack) {
    stack.clear();
    stack.push_back(start);
    mark[static_cast<std::size_t>(start)] = stamp;
    std::int64_t count = 0;
    while (!stack.empty()) {
        const PersonId u = stack.back();
        stack.pop_back();
        ++count;
        for (PersonId v : adj[static_cast<std::size_t>(u)]) {
            if (mark[static_cast<std::size_t>(v)] == stamp) continue;
            mark[static_cast<std::size_t>(v)] = stamp;
            stack.push_back(v);
        }
    }
    return count;
}

std::vector<std::vector<PersonId>> reverse(const std::vector<std::vector<PersonId>>& adj) {
    std::vector<std::vector<PersonId>> rev(adj.size());
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (PersonId v : adj[u]) rev[static_cast<std::size_t>(v)].push_back(static_cast<PersonId>(u));
    return rev;
}

void check_compatible(const Population& pop, const ModelParams& params) {
    if (pop.h() != params.h || pop.d() != params.d)
        throw ConfigError("population structure does not match the model parameters");
}

}  // namespace

ContactDraw draw_contacts(const Population& pop, const ModelParams& params, SeedSpec seed, PersonId u,
                          bool with_global) {
    ContactDraw out;
    Rng rng(seed.child(static_cast<std::uint64_t>(u)));
    out.infectious_period = draw_local(pop, params, rng, u, [&](PersonId v) { out.local.push_back(v); });
    if (with_global)
        draw_global(pop, params, rng, out.infectious_period, [&](PersonId v) { out.global.push_back(v); });
    return out;
}

Outcome simulate_final(const Population& pop, const ModelParams& params, SeedSpec seed,
                       std::optional<PersonId> initial) {
    check_compatible(pop, params);
    const auto n = static_cast<std::size_t>(pop.size());
    Outcome out;
    if (initial) {
        if (*initial < 0 || static_cast<std::size_t>(*initial) >= n) throw ConfigError("initial infective out of range");
        out.initial = *initial;
    } else {
        Rng rng(seed.child(kInitialTag));
        out.initial = static_cast<PersonId>(rng.below(n));
    }
    out.infected.assign(n, 0);

    std::deque<PersonId> queue;
    auto infect = [&](PersonId v) {
        auto& flag = out.infected[static_cast<std::size_t>(v)];
        if (flag) return;
        flag = 1;
        ++out.final_size;
        queue.push_back(v);
    };
    infect(out.initial);
    while (!queue.empty()) {
        const PersonId u = queue.front();
        queue.pop_front();
        Rng rng(seed.child(static_cast<std::uint64_t>(u)));
        const double I = draw_local(pop, params, rng, u, infect);
        out.severity += I;
        draw_global(pop, params, rng, I, infect);
    }
    return out;
}

Census clump_susset_census(const Population& pop, const ModelParams& params, SeedSpec seed) {
    check_compatible(pop, params);
    const auto adj = realize_local_graph(pop, params, seed);
    const auto rev = reverse(adj);
    const auto n = static_cast<std::int64_t>(adj.size());
    Census c;
    c.clump_size.assign(static_cast<std::size_t>(n), 0);
    c.susset_size.assign(static_cast<std::size_t>(n), 0);
#pragma omp parallel
    {
        std::vector<std::uint32_t> mark_out(static_cast<std::size_t>(n), 0), mark_in(static_cast<std::size_t>(n), 0);
        std::vector<PersonId> stack;
        std::uint32_t stamp = 0;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) {
            ++stamp;
            c.clump_size[static_cast<std::size_t>(i)] = reach_count(adj, static_cast<PersonId>(i), mark_out, stamp, stack);
            c.susset_size[static_cast<std::size_t>(i)] = reach_count(rev, static_cast<PersonId>(i), mark_in, stamp, stack);
        }
    }
    return c;
}

Census clump_susset_census_serial(const Population& pop, const ModelParams& params, SeedSpec seed) {
    check_compatible(pop, params);
    const auto n = static_cast<std::size_t>(pop.size());
    std::vector<std::vector<PersonId>> adj(n);
    for (std::size_t u = 0; u < n; ++u) {
        Rng rng(seed.child(u));
        draw_local(pop, params, rng, static_cast<PersonId>(u), [&](PersonId v) { adj[u].push_back(v); });
    }
    const auto rev = reverse(adj);
    Census c;
    c.clump_size.resize(n);
    c.susset_size.resize(n);
    std::vector<std::uint32_t> mark_out(n, 0), mark_in(n, 0);
    std::vector<PersonId> stack;
    for (std::size_t i = 0; i < n; ++i) {
        const auto stamp = static_cast<std::uint32_t>(i + 1);
        c.clump_size[i] = reach_count(adj, static_cast<PersonId>(i), mark_out, stamp, stack);
        c.susset_size[i] = reach_count(rev, static_cast<PersonId>(i), mark_in, stamp, stack);
    }
    return c;
}

}  // namespace hwepi
