#include "hwepi/within_complex.hpp"

#include <cmath>

#include "hwepi/errors.hpp"

namespace hwepi {

ComplexSampler::ComplexSampler(const ComplexStructure& s, const ModelParams& params) : s_(s), params_(params) {
    s_.validate();
    for (int g = 0; g < s_.groups(); ++g)
        for (int i = 0; i < s_.sizes[static_cast<std::size_t>(g)]; ++i) group_.push_back(g);
    k_ = static_cast<int>(group_.size());
    const int sg = s_.seed_group();
    for (int v = 0; v < k_; ++v)
        if (group_[static_cast<std::size_t>(v)] == sg) {
            seed_ = v;
            break;
        }
    rate_class_.assign(static_cast<std::size_t>(k_ * k_), 0);
    for (int a = 0; a < k_; ++a)
        for (int b = 0; b < k_; ++b) {
            if (a == b) continue;
            const int ga = group_[static_cast<std::size_t>(a)], gb = group_[static_cast<std::size_t>(b)];
            std::uint8_t c = 0;
            if (ComplexStructure::same_household(ga, gb, s_.d)) c |= 1;
            if (s_.in_workplace(ga) && s_.in_workplace(gb)) c |= 2;
            rate_class_[static_cast<std::size_t>(a * k_ + b)] = c;
        }
    for (int v = 0; v < k_; ++v) {
        if (v == seed_) continue;
        const auto c = rate_class_[static_cast<std::size_t>(seed_ * k_ + v)];
        if (c & 1) house_.push_back(v);
        if (c & 2) work_.push_back(v);
    }
    flag_.assign(static_cast<std::size_t>(k_), 0);
    period_.assign(static_cast<std::size_t>(k_), 0.0);
}

double ComplexSampler::edge_prob(int rate_class, double I) const {
    double r = 0.0;
    if (rate_class & 1) r += params_.beta_h_pair();
    if (rate_class & 2) r += params_.beta_w_pair();
    return -std::expm1(-r * I);
}

void ComplexSampler::infect(int v, std::vector<int>& queue) {
    auto& f = flag_[static_cast<std::size_t>(v)];
    if (f) return;
    f = 1;
    queue.push_back(v);
}

namespace {
// Uniform l-subset of `pool` (partial Fisher-Yates on a copy held in `buf`).
template <typename F>
void choose(Rng& rng, const std::vector<int>& pool, int l, std::vector<int>& buf, F&& take) {
    if (l < 0 || l > static_cast<int>(pool.size())) throw ConfigError("seed contact count exceeds eligible partners");
    buf = pool;
    for (int i = 0; i < l; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(buf.size() - static_cast<std::size_t>(i));
        std::swap(buf[static_cast<std::size_t>(i)], buf[j]);
        take(buf[static_cast<std::size_t>(i)]);
    }
}
}  // namespace

void ComplexSampler::clump(Rng& rng, SeedConstraint c, bool with_fine, WithinComplexOutcome& out) {
    const int groups = s_.groups();
    out.infected.assign(static_cast<std::size_t>(groups), 0);
    out.severity = 0.0;
    out.z_r = out.z_h = out.z_w = 0;
    if (with_fine) out.fine.assign(static_cast<std::size_t>(fine_dim(s_.h, s_.d)), 0);
    std::fill(flag_.begin(), flag_.end(), 0);
    flag_[static_cast<std::size_t>(seed_)] = 1;

    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(k_));
    switch (c.kind) {
        case SeedConstraint::Kind::none: {
            const double I = params_.infectious_period.sample(rng);
            for (int v = 0; v < k_; ++v) {
                const auto rc = rate_class_[static_cast<std::size_t>(seed_ * k_ + v)];
                if (rc && rng.uniform() < edge_prob(rc, I)) infect(v, queue);
            }
            break;
        }
        case SeedConstraint::Kind::exactly: {
            if (s_.seed == SeedType::R) throw ConfigError("remainer seeds take a (j,l) constraint");
            const auto& pool = s_.seed == SeedType::H ? house_ : work_;
            choose(rng, pool, c.l, scratch_, [&](int v) { infect(v, queue); });
            break;
        }
        case SeedConstraint::Kind::remainer: {
            if (s_.seed != SeedType::R) throw ConfigError("(j,l) constraints apply to remainer seeds only");
            choose(rng, house_, c.j, scratch_, [&](int v) { infect(v, queue); });
            choose(rng, work_, c.l, scratch_, [&](int v) { infect(v, queue); });
            break;
        }
    }

    const double bh = params_.beta_h_pair(), bw = params_.beta_w_pair();
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        const double I = params_.infectious_period.sample(rng);
        period_[static_cast<std::size_t>(u)] = I;
        const double p[4] = {0.0, -std::expm1(-bh * I), -std::expm1(-bw * I), -std::expm1(-(bh + bw) * I)};
        for (int v = 0; v < k_; ++v) {
            if (flag_[static_cast<std::size_t>(v)]) continue;
            const auto rc = rate_class_[static_cast<std::size_t>(u * k_ + v)];
            if (rc && rng.uniform() < p[rc]) infect(v, queue);
        }
    }

    const int h = s_.h, w = s_.h * s_.d;
    for (int u : queue) {
        const int g = group_[static_cast<std::size_t>(u)];
        const double I = period_[static_cast<std::size_t>(u)];
        ++out.infected[static_cast<std::size_t>(g)];
        out.severity += I;
        const SeedType y = offspring_type(g, s_.d);
        if (y == SeedType::R) {
            ++out.z_r;
            continue;
        }
        (y == SeedType::H ? out.z_h : out.z_w)++;
        if (!with_fine) continue;
        // Contacts this mover will make in its other complex, from its own period.
        const int partners = y == SeedType::H ? h - 1 : w - 1;
        const double q = -std::expm1(-(y == SeedType::H ? bh : bw) * I);
        int k = 0;
        for (int i = 0; i < partners; ++i) k += rng.uniform() < q ? 1 : 0;
        if (k > 0) ++out.fine[static_cast<std::size_t>(fine_index(y, k, h))];
    }
}

void ComplexSampler::susset(Rng& rng, SussetOutcome& out) {
    out.members.assign(static_cast<std::size_t>(s_.groups()), 0);
    out.z_r = out.z_h = out.z_w = 0;
    out.periods_drawn = 0;
    std::fill(flag_.begin(), flag_.end(), 0);  // bit 0: in set, bit 1: period drawn
    flag_[static_cast<std::size_t>(seed_)] = 1;

    std::vector<int> queue{seed_};
    queue.reserve(static_cast<std::size_t>(k_));
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        for (int v = 0; v < k_; ++v) {
            auto& f = flag_[static_cast<std::size_t>(v)];
            if (f & 1) continue;
            const auto rc = rate_class_[static_cast<std::size_t>(v * k_ + u)];
            if (!rc) continue;
            if (!(f & 2)) {
                period_[static_cast<std::size_t>(v)] = params_.infectious_period.sample(rng);
                f |= 2;
                ++out.periods_drawn;
            }
            if (rng.uniform() < edge_prob(rc, period_[static_cast<std::size_t>(v)])) {
                f |= 1;
                queue.push_back(v);
            }
        }
    }
    out.seed_period_drawn = (flag_[static_cast<std::size_t>(seed_)] & 2) != 0;
    for (std::size_t qi = 1; qi < queue.size(); ++qi) {
        const int g = group_[static_cast<std::size_t>(queue[qi])];
        ++out.members[static_cast<std::size_t>(g)];
        switch (offspring_type(g, s_.d)) {
            case SeedType::R: ++out.z_r; break;
            case SeedType::H: ++out.z_h; break;
            case SeedType::W: ++out.z_w; break;
        }
    }
}

WithinComplexOutcome run_within_complex(const ComplexStructure& s, const ModelParams& params, Rng& rng,
                                        SeedConstraint c, bool with_fine) {
    ComplexSampler sampler(s, params);
    WithinComplexOutcome out;
    sampler.clump(rng, c, with_fine, out);
    return out;
}

SussetOutcome susset_within_complex(const ComplexStructure& s, const ModelParams& params, Rng& rng) {
    ComplexSampler sampler(s, params);
    SussetOutcome out;
    sampler.susset(rng, out);
    return out;
}

}  // namespace hwepi
