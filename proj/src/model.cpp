#include "hwepi/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hwepi/errors.hpp"

namespace hwepi {

InfectiousPeriod InfectiousPeriod::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw ConfigError("gamma shape must be positive");
    return InfectiousPeriod(IpLaw::gamma, shape);
}

InfectiousPeriod InfectiousPeriod::parse(const std::string& text) {
    if (text == "constant") return constant();
    if (text == "exponential") return exponential();
    if (text.rfind("gamma:", 0) == 0) {
        try {
            std::size_t used = 0;
            const double k = std::stod(text.substr(6), &used);
            if (used != text.size() - 6) throw ConfigError("trailing characters");
            return gamma(k);
        } catch (const std::logic_error&) {
            throw ConfigError("bad gamma shape in infectious_period '" + text + "'");
        }
    }
    throw ConfigError("unknown infectious_period '" + text + "'");
}

double InfectiousPeriod::variance() const {
    switch (law_) {
        case IpLaw::constant: return 0.0;
        case IpLaw::exponential: return 1.0;
        case IpLaw::gamma: return 1.0 / shape_;
    }
    return 0.0;
}

double InfectiousPeriod::laplace(double nu) const { return static_cast<double>(laplace_ld(nu)); }

long double InfectiousPeriod::laplace_ld(long double nu) const {
    switch (law_) {
        case IpLaw::constant: return std::exp(-nu);
        case IpLaw::exponential: return 1.0L / (1.0L + nu);
        case IpLaw::gamma: return std::pow(1.0L + nu / shape_, -static_cast<long double>(shape_));
    }
    return 0.0L;
}

double InfectiousPeriod::sample(Rng& rng) const {
    switch (law_) {
        case IpLaw::constant: return 1.0;
        case IpLaw::exponential: return rng.exponential();
        case IpLaw::gamma: {
            std::gamma_distribution<double> dist(shape_, 1.0 / shape_);
            return dist(rng);
        }
    }
    return 1.0;
}

std::string InfectiousPeriod::name() const {
    switch (law_) {
        case IpLaw::constant: return "constant";
        case IpLaw::exponential: return "exponential";
        case IpLaw::gamma: {
            std::ostringstream os;
            os << "gamma:" << shape_;
            return os.str();
        }
    }
    return "?";
}

Rates from_reparam(const Reparam& r) {
    if (!(r.beta >= 0.0) || !std::isfinite(r.beta)) throw ConfigError("beta must be finite and >= 0");
    if (!(r.pi_g >= 0.0 && r.pi_g <= 1.0)) throw ConfigError("pi_g must lie in [0,1]");
    if (!(r.pi_h_given_gc >= 0.0 && r.pi_h_given_gc <= 1.0))
        throw ConfigError("pi_h_given_gc must lie in [0,1]");
    const double local = r.beta * (1.0 - r.pi_g);
    return Rates{local * r.pi_h_given_gc, local * (1.0 - r.pi_h_given_gc), r.beta * r.pi_g};
}

Reparam to_reparam(const Rates& r) {
    if (!(r.beta_h >= 0.0 && r.beta_w >= 0.0 && r.beta_g >= 0.0))
        throw ConfigError("contact rates must be >= 0");
    const double beta = r.beta_h + r.beta_w + r.beta_g;
    if (!(beta > 0.0)) throw ConfigError("at least one contact rate must be positive");
    const double local = r.beta_h + r.beta_w;
    // The household share is vacuous without local contacts; report 1/2.
    const double share = local > 0.0 ? r.beta_h / local : 0.5;
    return Reparam{beta, r.beta_g / beta, share};
}

void ModelParams::validate() const {
    if (h < 2) throw ConfigError("household size h must be >= 2");
    if (d < 1) throw ConfigError("households per workplace d must be >= 1");
    if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0,1]");
    for (double b : {rates.beta_h, rates.beta_w, rates.beta_g})
        if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("contact rates must be finite and >= 0");
    if (n < 0) throw ConfigError("n must be positive");
    if (n > 0 && n % w() != 0) {
        std::ostringstream os;
        os << "n=" << n << " is not a multiple of the workplace size w=" << w();
        throw ConfigError(os.str());
    }
    if (n > std::int64_t{2000000000}) throw ConfigError("n too large for 32-bit individual ids");
}

std::string ModelParams::describe() const {
    std::ostringstream os;
    os << "h=" << h << " d=" << d << " theta=" << theta << " beta_h=" << rates.beta_h
       << " beta_w=" << rates.beta_w << " beta_g=" << rates.beta_g
       << " I=" << infectious_period.name() << " n=" << n;
    return os.str();
}

}  // namespace hwepi
