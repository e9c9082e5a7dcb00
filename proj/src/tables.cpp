#include "hwepi/tables.hpp"

#include <cmath>
#include <ostream>

#include "hwepi/csv.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/exact_final_state.hpp"
#include "hwepi/within_complex.hpp"

namespace hwepi {

double JointPmf3::total() const {
    double t = 0.0;
    for (double v : p_) t += v;
    return t;
}

std::array<double, 3> JointPmf3::mean() const {
    std::array<double, 3> m{};
    for (int r = 0; r < side_; ++r)
        for (int h = 0; h < side_; ++h)
            for (int w = 0; w < side_; ++w) {
                const double p = at(r, h, w);
                if (p == 0.0) continue;
                m[0] += p * r;
                m[1] += p * h;
                m[2] += p * w;
            }
    return m;
}

void JointPmf3::add(const JointPmf3& other, double weight) {
    if (other.side_ == 0 || weight == 0.0) return;
    if (side_ == 0) *this = JointPmf3(other.side_ - 1);
    if (other.side_ != side_) throw ConfigError("joint PMFs of different shapes");
    for (std::size_t i = 0; i < p_.size(); ++i) p_[i] += weight * other.p_[i];
}

OffspringPgf::OffspringPgf(const JointPmf3& pmf) {
    const int side = pmf.side();
    for (int r = 0; r < side; ++r)
        for (int h = 0; h < side; ++h)
            for (int w = 0; w < side; ++w) {
                const double p = pmf.at(r, h, w);
                if (p == 0.0) continue;
                cells_.push_back({r, h, w, p});
                max_ = std::max({max_, r, h, w});
                total_ += p;
            }
    mean_ = pmf.mean();
}

double OffspringPgf::operator()(double s1, double s2, double s3) const {
    // Small exponents: power tables beat repeated pow().
    double p1[64], p2[64], p3[64];
    const int m = std::min(max_, 63);
    p1[0] = p2[0] = p3[0] = 1.0;
    for (int i = 1; i <= m; ++i) {
        p1[i] = p1[i - 1] * s1;
        p2[i] = p2[i - 1] * s2;
        p3[i] = p3[i - 1] * s3;
    }
    double g = 0.0;
    for (const auto& c : cells_) g += c.p * p1[c.r] * p2[c.h] * p3[c.w];
    return g;
}

namespace {

JointPmf3 coarse_from_groups(const GroupPmf& g, const ComplexStructure& s) {
    JointPmf3 out(s.h * s.d);
    for (std::size_t i = 0; i < g.prob.size(); ++i) {
        if (g.prob[i] == 0.0L) continue;
        const auto l = g.unravel(i);
        int z[3] = {0, 0, 0};
        for (int grp = 0; grp < s.groups(); ++grp)
            z[static_cast<int>(offspring_type(grp, s.d))] += l[static_cast<std::size_t>(grp)];
        out.at(z[0], z[1], z[2]) += static_cast<double>(g.prob[i]);
    }
    return out;
}

std::uint64_t bank_stream(TableKind kind, SeedType seed) {
    return 0x7ab1e000ULL + static_cast<std::uint64_t>(kind) * 3 + static_cast<std::uint64_t>(seed);
}

}  // namespace

StructureBank StructureBank::monte_carlo(const ModelParams& params, SeedType seed, TableKind kind,
                                         const std::vector<double>& thetas, std::int64_t n_mc,
                                         std::uint64_t base_seed, int replicates) {
    if (n_mc < 1) throw ConfigError("n_mc must be at least 1");
    if (replicates < 1) throw ConfigError("need at least one replicate");
    StructureBank b;
    b.h_ = params.h;
    b.d_ = params.d;
    b.movers_ = canonical_mover_vectors(params.h, params.d);
    const std::size_t S = b.movers_.size();
    b.n_.assign(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
        double wmax = 0.0;
        for (double th : thetas) wmax = std::max(wmax, canonical_weight(params.h, b.movers_[s], th));
        if (wmax <= 0.0) continue;
        const auto want = static_cast<std::int64_t>(std::ceil(static_cast<double>(n_mc) * wmax));
        const std::int64_t per = (want + replicates - 1) / replicates;
        b.n_[s] = per * replicates;
        b.draws_ += b.n_[s];
    }
    const int w = params.w();
    b.reps_.assign(S, std::vector<JointPmf3>(static_cast<std::size_t>(replicates)));
    const SeedSpec root{base_seed, bank_stream(kind, seed)};
    const auto jobs = static_cast<std::int64_t>(S) * replicates;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t job = 0; job < jobs; ++job) {
        const auto s = static_cast<std::size_t>(job / replicates);
        const auto r = static_cast<std::size_t>(job % replicates);
        if (b.n_[s] == 0) continue;
        const auto structure = make_structure(params.h, params.d, seed, b.movers_[s]);
        ComplexSampler sampler(structure, params);
        Rng rng(root.child(s).child(r));
        JointPmf3 counts(w);
        const std::int64_t n = b.n_[s] / replicates;
        if (kind == TableKind::clump) {
            WithinComplexOutcome o;
            for (std::int64_t i = 0; i < n; ++i) {
                sampler.clump(rng, SeedConstraint::none(), false, o);
                counts.at(o.z_r, o.z_h, o.z_w) += 1.0;
            }
        } else {
            SussetOutcome o;
            for (std::int64_t i = 0; i < n; ++i) {
                sampler.susset(rng, o);
                counts.at(o.z_r, o.z_h, o.z_w) += 1.0;
            }
        }
        for (double& v : counts.data()) v /= static_cast<double>(n);
        b.reps_[s][r] = std::move(counts);
    }
    b.law_.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        if (b.n_[s] == 0) continue;
        for (const auto& rep : b.reps_[s]) b.law_[s].add(rep, 1.0 / replicates);
    }
    return b;
}

StructureBank StructureBank::exact(const ModelParams& params, SeedType seed) {
    if (!params.infectious_period.is_constant())
        throw ConfigError("exact tables need a constant infectious period");
    StructureBank b;
    b.h_ = params.h;
    b.d_ = params.d;
    b.exact_ = true;
    b.movers_ = canonical_mover_vectors(params.h, params.d);
    const std::size_t S = b.movers_.size();
    b.law_.resize(S);
    b.n_.assign(S, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(S); ++i) {
        const auto s = static_cast<std::size_t>(i);
        const auto structure = make_structure(params.h, params.d, seed, b.movers_[s]);
        b.law_[s] = coarse_from_groups(exact_final_state_dist(structure, params), structure);
    }
    return b;
}

JointPmf3 StructureBank::mix(double theta) const {
    JointPmf3 out(h_ * d_);
    for (std::size_t s = 0; s < movers_.size(); ++s) {
        const double w = canonical_weight(h_, movers_[s], theta);
        if (w == 0.0) continue;
        if (law_[s].side() == 0) throw ConfigError("structure bank was not built for this theta");
        out.add(law_[s], w);
    }
    return out;
}

std::vector<JointPmf3> StructureBank::mix_replicates(double theta) const {
    std::vector<JointPmf3> out(static_cast<std::size_t>(replicates()), JointPmf3(h_ * d_));
    for (std::size_t s = 0; s < movers_.size(); ++s) {
        const double w = canonical_weight(h_, movers_[s], theta);
        if (w == 0.0) continue;
        if (n_[s] == 0) throw ConfigError("structure bank was not built for this theta");
        for (std::size_t r = 0; r < out.size(); ++r) out[r].add(reps_[s][r], w);
    }
    return out;
}

JointPmf3 StructureBank::cell_stderr(double theta) const {
    JointPmf3 var(h_ * d_);
    if (exact_) return var;
    for (std::size_t s = 0; s < movers_.size(); ++s) {
        const double w = canonical_weight(h_, movers_[s], theta);
        if (w == 0.0 || n_[s] == 0) continue;
        const auto& p = law_[s].data();
        auto& v = var.data();
        for (std::size_t i = 0; i < p.size(); ++i)
            v[i] += w * w * p[i] * (1.0 - p[i]) / static_cast<double>(n_[s]);
    }
    for (double& v : var.data()) v = std::sqrt(v);
    return var;
}

CoarseTables CoarseBanks::at(double theta) const {
    CoarseTables t;
    t.kind = kind;
    t.exact = bank[0].is_exact();
    t.n_mc = n_mc;
    t.seed = seed;
    for (std::size_t x = 0; x < 3; ++x) {
        t.pmf[x] = bank[x].mix(theta);
        t.stderr_cells[x] = bank[x].cell_stderr(theta);
    }
    if (!t.exact) {
        const int K = bank[0].replicates();
        t.replicates.resize(static_cast<std::size_t>(K));
        for (std::size_t x = 0; x < 3; ++x) {
            auto reps = bank[x].mix_replicates(theta);
            for (int r = 0; r < K; ++r) t.replicates[static_cast<std::size_t>(r)][x] = std::move(reps[static_cast<std::size_t>(r)]);
        }
    }
    return t;
}

CoarseBanks build_banks(const ModelParams& params, TableKind kind, bool exact, const std::vector<double>& thetas,
                        std::int64_t n_mc, std::uint64_t seed, int replicates) {
    CoarseBanks out;
    out.kind = kind;
    out.n_mc = exact ? 0 : n_mc;
    out.seed = seed;
    for (SeedType x : {SeedType::R, SeedType::H, SeedType::W}) {
        auto& b = out.bank[static_cast<std::size_t>(x)];
        b = exact ? StructureBank::exact(params, x)
                  : StructureBank::monte_carlo(params, x, kind, thetas, n_mc, seed, replicates);
    }
    return out;
}

CoarseTables build_tables(const ModelParams& params, TableKind kind, bool exact, std::int64_t n_mc,
                          std::uint64_t seed, int replicates) {
    return build_banks(params, kind, exact, {params.theta}, n_mc, seed, replicates).at(params.theta);
}

void write_tables_csv(const CoarseTables& t, std::ostream& out) {
    out << kSchemaLine << '\n' << "seed_type,z_r,z_h,z_w,prob,stderr\n";
    for (SeedType x : {SeedType::R, SeedType::H, SeedType::W}) {
        const auto& p = t[x];
        const auto& se = t.stderr_cells[static_cast<std::size_t>(x)];
        for (int r = 0; r < p.side(); ++r)
            for (int h = 0; h < p.side(); ++h)
                for (int w = 0; w < p.side(); ++w) {
                    const double v = p.at(r, h, w);
                    if (v == 0.0) continue;
                    out << to_char(x) << ',' << r << ',' << h << ',' << w << ',' << fmt(v) << ','
                        << fmt(se.side() ? se.at(r, h, w) : 0.0) << '\n';
                }
    }
}

}  // namespace hwepi
