#include <doctest.h>

#include <cmath>

#include "hwepi/config.hpp"
#include "hwepi/errors.hpp"
#include "hwepi/model.hpp"
#include "hwepi/rng.hpp"

using namespace hwepi;

TEST_CASE("from_reparam splits the overall rate") {
    auto r = from_reparam({3.0, 0.025, 0.5});
    CHECK(r.beta_h == doctest::Approx(1.4625).epsilon(1e-15));
    CHECK(r.beta_w == doctest::Approx(1.4625).epsilon(1e-15));
    CHECK(r.beta_g == doctest::Approx(0.075).epsilon(1e-15));
    r = from_reparam({3.0, 0.0, 0.5});
    CHECK(r.beta_h == 1.5);
    CHECK(r.beta_w == 1.5);
    CHECK(r.beta_g == 0.0);
    r = from_reparam({0.0, 0.5, 0.5});
    CHECK(r.beta_h + r.beta_w + r.beta_g == 0.0);
    CHECK_THROWS_AS(from_reparam({-1.0, 0.5, 0.5}), ConfigError);
    CHECK_THROWS_AS(from_reparam({1.0, 1.5, 0.5}), ConfigError);
}

TEST_CASE("to_reparam inverts from_reparam") {
    auto q = to_reparam({1.4625, 1.4625, 0.075});
    CHECK(q.beta == doctest::Approx(3.0));
    CHECK(q.pi_g == doctest::Approx(0.025));
    CHECK(q.pi_h_given_gc == doctest::Approx(0.5));
    q = to_reparam({2.0, 0.0, 0.0});
    CHECK(q.beta == 2.0);
    CHECK(q.pi_g == 0.0);
    CHECK(q.pi_h_given_gc == 1.0);
    q = to_reparam({0.0, 0.0, 1.0});
    CHECK(q.pi_h_given_gc == 0.5);
    CHECK_THROWS_AS(to_reparam({0.0, 0.0, 0.0}), ConfigError);
    for (double beta : {0.5, 3.0, 7.25})
        for (double pg : {0.0, 0.025, 0.5, 1.0})
            for (double ph : {0.0, 0.3, 1.0}) {
                if (pg == 1.0 && ph != 0.5) continue;  // local split is vacuous there
                const auto back = to_reparam(from_reparam({beta, pg, ph}));
                CHECK(back.beta == doctest::Approx(beta).epsilon(1e-14));
                CHECK(back.pi_g == doctest::Approx(pg).epsilon(1e-14));
                CHECK(back.pi_h_given_gc == doctest::Approx(ph).epsilon(1e-14));
            }
}

TEST_CASE("per-pair rates scale back exactly") {
    ModelParams p;
    p.h = 4;
    p.d = 3;
    p.rates = {1.7, 2.9, 0.1};
    CHECK(p.beta_h_pair() * (p.h - 1) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(p.beta_w_pair() * (p.w() - 1) == doctest::Approx(2.9).epsilon(1e-15));
}

TEST_CASE("infectious period laws have mean one") {
    Rng rng(SeedSpec{7, 0});
    CHECK(InfectiousPeriod::constant().sample(rng) == 1.0);
    CHECK(InfectiousPeriod::constant().variance() == 0.0);
    CHECK(InfectiousPeriod::exponential().variance() == 1.0);
    CHECK(InfectiousPeriod::gamma(4).variance() == doctest::Approx(0.25));

    const int N = 1000000;
    double s = 0.0;
    auto ex = InfectiousPeriod::exponential();
    for (int i = 0; i < N; ++i) s += ex.sample(rng);
    CHECK(std::abs(s / N - 1.0) < 0.005);

    auto g = InfectiousPeriod::gamma(4);
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = g.sample(rng);
        m += x;
        m2 += x * x;
    }
    m /= N;
    CHECK(std::abs(m2 / N - m * m - 0.25) < 0.01);
}

TEST_CASE("Laplace transforms match sample averages") {
    Rng rng(SeedSpec{8, 0});
    for (const auto& ip : {InfectiousPeriod::constant(), InfectiousPeriod::exponential(), InfectiousPeriod::gamma(2.5)}) {
        double s = 0.0;
        const int N = 200000;
        for (int i = 0; i < N; ++i) s += std::exp(-0.7 * ip.sample(rng));
        CHECK(std::abs(s / N - ip.laplace(0.7)) < 4e-3);
    }
    CHECK(InfectiousPeriod::exponential().laplace(1.0) == doctest::Approx(0.5));
    CHECK(InfectiousPeriod::parse("gamma:3") == InfectiousPeriod::gamma(3));
    CHECK_THROWS_AS(InfectiousPeriod::parse("weibull"), ConfigError);
}

TEST_CASE("streams are pure functions of the seed") {
    Rng a(SeedSpec{42, 3}), b(SeedSpec{42, 3}), c(SeedSpec{42, 4});
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        differ = differ || x != z;
    }
    CHECK(differ);
    CHECK(SeedSpec{1, 2}.child(5) == SeedSpec{1, 2}.child(5));
    CHECK_FALSE(SeedSpec{1, 2}.child(5) == SeedSpec{1, 2}.child(6));
}

TEST_CASE("config files accept exactly one rate parametrization") {
    const auto c = parse_config("h=4\nd=1\ntheta=0.4\nbeta=3\npi_g=0.025\npi_h_given_gc=0.5\nn=1000\nseed=9\n");
    CHECK(c.params.h == 4);
    CHECK(c.params.rates.beta_g == doctest::Approx(0.075));
    CHECK(c.seed.value() == 9);
    const auto again = parse_config(format_config(c));
    CHECK(again.params.rates.beta_h == c.params.rates.beta_h);
    CHECK(again.params.n == 1000);
    CHECK_THROWS_AS(parse_config("h=4\nbeta=3\npi_g=0\npi_h_given_gc=0.5\nbeta_h=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("h=4\nd=1\nbeta_h=1\nbeta_w=1\nbeta_g=0\nn=1001\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("h=1\nbeta_h=1\nbeta_w=1\nbeta_g=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("h=4\ntheta=1.2\nbeta_h=1\nbeta_w=1\nbeta_g=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("colour=blue\n"), ConfigError);
}
