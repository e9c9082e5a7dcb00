#include "hwepi/fine_types.hpp"

#include <cmath>

namespace hwepi {
namespace {

long double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    long double c = 1.0L;
    for (int i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return c;
}

long double binom_pmf(int n, int k, long double p) {
    return choose(n, k) * std::pow(p, k) * std::pow(1.0L - p, n - k);
}

}  // namespace

long double binomial_laplace_mixture(const InfectiousPeriod& ip, long double nu, int n1, int i1, long double a,
                                     int n2, int i2, long double b) {
    if (i1 < 0 || i1 > n1 || i2 < 0 || i2 > n2) return 0.0L;
    if (ip.is_constant())
        return std::exp(-nu) * binom_pmf(n1, i1, -std::expm1(-a)) * binom_pmf(n2, i2, -std::expm1(-b));
    long double sum = 0.0L;
    for (int r1 = 0; r1 <= i1; ++r1) {
        for (int r2 = 0; r2 <= i2; ++r2) {
            const long double sign = ((r1 + r2) % 2 == 0) ? 1.0L : -1.0L;
            const long double arg = nu + a * (n1 - i1 + r1) + b * (n2 - i2 + r2);
            sum += sign * choose(i1, r1) * choose(i2, r2) * ip.laplace_ld(arg);
        }
    }
    const long double v = choose(n1, i1) * choose(n2, i2) * sum;
    return v < 0.0L ? 0.0L : v;
}

FineTypeProbs fine_type_probs(const ModelParams& params) {
    const int h = params.h, w = params.w();
    FineTypeProbs out;
    const auto& ip = params.infectious_period;
    for (int i = 0; i < h; ++i)
        out.p_h.push_back(static_cast<double>(
            binomial_laplace_mixture(ip, 0.0L, h - 1, i, params.beta_h_pair(), 0, 0, 0.0L)));
    for (int i = 0; i < w; ++i)
        out.p_w.push_back(static_cast<double>(
            binomial_laplace_mixture(ip, 0.0L, w - 1, i, params.beta_w_pair(), 0, 0, 0.0L)));
    return out;
}

std::vector<std::vector<double>> seed_contact_weights(const ModelParams& params, double nu, bool unprimed) {
    const int h = params.h, w = params.w();
    const long double bh = unprimed ? params.rates.beta_h : params.beta_h_pair();
    const long double bw = unprimed ? params.rates.beta_w : params.beta_w_pair();
    std::vector<std::vector<double>> om(static_cast<std::size_t>(h), std::vector<double>(static_cast<std::size_t>(w)));
    for (int j = 0; j < h; ++j)
        for (int l = 0; l < w; ++l)
            om[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = static_cast<double>(
                binomial_laplace_mixture(params.infectious_period, nu, h - 1, j, bh, w - 1, l, bw));
    return om;
}

}  // namespace hwepi
