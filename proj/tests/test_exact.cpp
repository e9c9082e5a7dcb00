#include <doctest.h>

#include <cmath>

#include "enumeration.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/exact_final_state.hpp"

using namespace hwepi;

namespace {

oracle::GroupLaw to_law(const GroupPmf& pmf) {
    oracle::GroupLaw law;
    for (std::size_t i = 0; i < pmf.prob.size(); ++i)
        if (pmf.prob[i] > 0.0L) law[pmf.unravel(i)] += static_cast<double>(pmf.prob[i]);
    return law;
}

ModelParams pair_model(double theta, double bh, double bw) {
    ModelParams p;
    p.h = 2;
    p.d = 1;
    p.theta = theta;
    p.rates = {bh, bw, 0.0};
    return p;
}

}  // namespace

TEST_CASE("single-type Reed-Frost closed forms") {
    const double r = 0.7, q = std::exp(-r), pr = 1.0 - q;
    const auto one = reed_frost_final_size({1}, {1}, {{r}});
    CHECK(static_cast<double>(one.prob[1]) == doctest::Approx(pr).epsilon(1e-14));

    const auto two = reed_frost_final_size({2}, {1}, {{r}});
    CHECK(static_cast<double>(two.prob[0]) == doctest::Approx(q * q).epsilon(1e-14));
    CHECK(static_cast<double>(two.prob[1]) == doctest::Approx(2.0 * pr * q * q).epsilon(1e-14));
    CHECK(static_cast<double>(two.prob[2]) == doctest::Approx(1.0 - q * q - 2.0 * pr * q * q).epsilon(1e-14));
}

TEST_CASE("two nodes in one household and workplace") {
    // A remainer pair shares both settings: one edge at rate bh' + bw'.
    ModelParams p = pair_model(0.0, 0.4, 0.9);
    const auto s = make_structure(2, 1, SeedType::R, {0});
    const auto law = exact_final_state_dist(s, p);
    const double escape = std::exp(-(p.beta_h_pair() + p.beta_w_pair()));
    CHECK(static_cast<double>(law.total()) == doctest::Approx(1.0).epsilon(1e-15));
    double infected = 0.0;
    for (std::size_t i = 0; i < law.prob.size(); ++i)
        if (law.unravel(i)[0] == 1) infected += static_cast<double>(law.prob[i]);
    CHECK(infected == doctest::Approx(1.0 - escape).epsilon(1e-14));
}

TEST_CASE("exact laws are normalized") {
    for (int h : {2, 3, 4})
        for (int d : {1, 2})
            for (auto x : {SeedType::R, SeedType::H, SeedType::W}) {
                ModelParams p;
                p.h = h;
                p.d = d;
                p.theta = 0.3;
                p.rates = {1.7, 1.1, 0.0};
                for (const auto& ws : enumerate_structures(h, d, x, p.theta))
                    CHECK(static_cast<double>(exact_final_state_dist(ws.structure, p).total()) ==
                          doctest::Approx(1.0).epsilon(1e-12));
            }
}

TEST_CASE("exact laws match edge enumeration on every h=2, d=1 structure") {
    for (double bh : {0.3, 1.4})
        for (double bw : {0.0, 0.8, 2.5}) {
            const ModelParams p = pair_model(0.5, bh, bw);
            for (int x : {0, 1, 2}) {
                const int max_m = 1;
                for (int m = 0; m <= max_m; ++m) {
                    const auto s = make_structure(2, 1, static_cast<SeedType>(x), {m});
                    const auto mine = to_law(exact_final_state_dist(s, p));
                    const auto c = oracle::build_complex(2, 1, x, {m});
                    const auto ref = oracle::enumerate_groups(c, p.beta_h_pair(), p.beta_w_pair(), false);
                    CHECK(oracle::total_variation(mine, ref) < 1e-10);
                }
            }
        }
}

TEST_CASE("exact laws are consistent with simulation under a seed constraint") {
    ModelParams p;
    p.h = 3;
    p.d = 2;
    p.theta = 0.5;
    p.rates = {1.5, 1.5, 0.0};
    const auto s = make_structure(3, 2, SeedType::W, {1, 2});
    for (int l : {0, 1, 3}) {
        const auto c = SeedConstraint::exactly(l);
        const auto exact = to_law(exact_final_state_dist(s, p, c));
        oracle::GroupLaw mc;
        Rng rng(SeedSpec{11, static_cast<std::uint64_t>(l)});
        const int N = 200000;
        for (int i = 0; i < N; ++i) mc[run_within_complex(s, p, rng, c).infected] += 1.0 / N;
        CHECK(oracle::total_variation(exact, mc) < 0.015);
    }
}

TEST_CASE("exact laws need a constant infectious period") {
    ModelParams p = pair_model(0.5, 1.0, 1.0);
    p.infectious_period = InfectiousPeriod::exponential();
    CHECK_THROWS_AS(exact_final_state_dist(make_structure(2, 1, SeedType::R, {1}), p), ConfigError);
}
