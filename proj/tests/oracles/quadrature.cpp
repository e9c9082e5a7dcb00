#include "quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <stdexcept>

namespace oracle {

double expect_exponential(double (*f)(double, void*), void* params) {
    struct Wrap {
        double (*f)(double, void*);
        void* p;
    } wrap{f, params};
    gsl_function F;
    F.function = [](double x, void* w) {
        auto* ww = static_cast<Wrap*>(w);
        return std::exp(-x) * ww->f(x, ww->p);
    };
    F.params = &wrap;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    double result = 0.0, err = 0.0;
    const int status = gsl_integration_qagiu(&F, 0.0, 1e-14, 1e-12, 2000, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    if (status != 0) throw std::runtime_error("quadrature failed");
    return result;
}

namespace {

struct OutPattern {
    std::vector<double> rate;
    std::vector<bool> on;
};

double pattern_density(double I, void* p) {
    const auto* op = static_cast<const OutPattern*>(p);
    double v = 1.0;
    for (std::size_t k = 0; k < op->rate.size(); ++k) {
        const double miss = std::exp(-op->rate[k] * I);
        v *= op->on[k] ? 1.0 - miss : miss;
    }
    return v;
}

}  // namespace

GroupLaw quadrature_groups(const Complex& c, double bh, double bw, bool susset) {
    const int n = static_cast<int>(c.nodes.size());
    std::vector<std::vector<std::pair<int, double>>> out(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        if (susset && u == c.seed) continue;  // the seed's own edges cannot lead back to it
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            const double r = pair_rate(c.nodes[u], c.nodes[v], bh, bw);
            if (r > 0.0) out[u].emplace_back(v, r);
        }
    }
    std::vector<int> offset(static_cast<std::size_t>(n) + 1, 0);
    for (int u = 0; u < n; ++u) offset[u + 1] = offset[u] + static_cast<int>(out[u].size());
    const int E = offset[n];
    std::map<std::pair<int, std::uint64_t>, double> cache;
    GroupLaw law;
    for (std::uint64_t mask = 0; mask < (1ULL << E); ++mask) {
        double p = 1.0;
        for (int u = 0; u < n && p > 0.0; ++u) {
            const auto k = out[u].size();
            if (k == 0) continue;
            const std::uint64_t sub = (mask >> offset[u]) & ((1ULL << k) - 1);
            const auto key = std::make_pair(u, sub);
            auto it = cache.find(key);
            if (it == cache.end()) {
                OutPattern op;
                for (std::size_t e = 0; e < k; ++e) {
                    op.rate.push_back(out[u][e].second);
                    op.on.push_back((sub >> e) & 1ULL);
                }
                it = cache.emplace(key, expect_exponential(pattern_density, &op)).first;
            }
            p *= it->second;
        }
        if (p == 0.0) continue;
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u)
            for (std::size_t e = 0; e < out[u].size(); ++e)
                if ((mask >> (offset[u] + static_cast<int>(e))) & 1ULL) {
                    const int v = out[u][e].first;
                    if (susset)
                        adj[v].push_back(u);
                    else
                        adj[u].push_back(v);
                }
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<int> stack{c.seed};
        seen[c.seed] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        std::vector<int> counts(static_cast<std::size_t>(c.groups), 0);
        for (int u = 0; u < n; ++u)
            if (seen[u] && u != c.seed) ++counts[c.nodes[u].group];
        law[counts] += p;
    }
    return law;
}

CoarseLaw quadrature_mixed(int h, int d, int seed_type, double theta, double bh, double bw, bool susset) {
    CoarseLaw out;
    for (const auto& [m, w] : mover_law(h, d, seed_type, theta)) {
        const auto c = build_complex(h, d, seed_type, m);
        for (const auto& [z, p] : to_coarse(c, quadrature_groups(c, bh, bw, susset))) out[z] += w * p;
    }
    return out;
}

double exponential_binomial(int m, int i, double b) {
    struct P {
        int m, i;
        double b;
    } p{m, i, b};
    return expect_exponential(
        [](double I, void* v) {
            const auto* q = static_cast<const P*>(v);
            double c = 1.0;
            for (int k = 1; k <= q->i; ++k) c = c * (q->m - q->i + k) / k;
            const double hit = 1.0 - std::exp(-q->b * I);
            return c * std::pow(hit, q->i) * std::pow(1.0 - hit, q->m - q->i);
        },
        &p);
}

}  // namespace oracle
