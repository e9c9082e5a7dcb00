#pragma once

#include <cstdint>
#include <string>

#include "hwepi/rng.hpp"

namespace hwepi {

enum class IpLaw { constant, exponential, gamma };

/// Infectious-period law with mean fixed at one time unit.
class InfectiousPeriod {
public:
    static InfectiousPeriod constant() { return InfectiousPeriod(IpLaw::constant, 0.0); }
    static InfectiousPeriod exponential() { return InfectiousPeriod(IpLaw::exponential, 1.0); }
    /// Gamma with shape k and scale 1/k.
    static InfectiousPeriod gamma(double shape);
    /// Parses "constant", "exponential" or "gamma:<k>".
    static InfectiousPeriod parse(const std::string& text);

    [[nodiscard]] IpLaw law() const { return law_; }
    [[nodiscard]] double shape() const { return shape_; }
    [[nodiscard]] bool is_constant() const { return law_ == IpLaw::constant; }

    [[nodiscard]] double mean() const { return 1.0; }
    [[nodiscard]] double variance() const;
    /// E[exp(-nu I)] in closed form.
    [[nodiscard]] double laplace(double nu) const;
    [[nodiscard]] long double laplace_ld(long double nu) const;

    double sample(Rng& rng) const;

    [[nodiscard]] std::string name() const;

    friend bool operator==(const InfectiousPeriod&, const InfectiousPeriod&) = default;

private:
    InfectiousPeriod(IpLaw law, double shape) : law_(law), shape_(shape) {}
    IpLaw law_;
    double shape_;
};

struct Rates {
    double beta_h = 0.0;
    double beta_w = 0.0;
    double beta_g = 0.0;
};

/// Overall rate, global fraction and household share of the local rate.
struct Reparam {
    double beta = 0.0;
    double pi_g = 0.0;
    double pi_h_given_gc = 0.0;
};

Rates from_reparam(const Reparam& r);
Reparam to_reparam(const Rates& r);

struct ModelParams {
    int h = 2;           ///< household size
    int d = 1;           ///< households per workplace
    double theta = 0.0;  ///< mover probability
    Rates rates;
    InfectiousPeriod infectious_period = InfectiousPeriod::constant();
    std::int64_t n = 0;  ///< population size; 0 when only analytics are needed

    [[nodiscard]] int w() const { return d * h; }
    /// Per-pair household rate beta_H / (h-1).
    [[nodiscard]] double beta_h_pair() const { return rates.beta_h / static_cast<double>(h - 1); }
    /// Per-pair workplace rate beta_W / (w-1); zero when w == 1 cannot happen since h >= 2.
    [[nodiscard]] double beta_w_pair() const { return rates.beta_w / static_cast<double>(w() - 1); }

    /// Throws ConfigError on any violated invariant.
    void validate() const;
    [[nodiscard]] std::string describe() const;
};

}  // namespace hwepi
