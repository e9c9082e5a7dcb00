#pragma once

#include <vector>

#include "hwepi/model.hpp"

namespace hwepi {

/// E[ exp(-nu I) * Bin(n1, 1-e^{-a I})(i1) * Bin(n2, 1-e^{-b I})(i2) ] in closed
/// form, by expanding the binomial probabilities into Laplace transforms of I.
long double binomial_laplace_mixture(const InfectiousPeriod& ip, long double nu, int n1, int i1, long double a,
                                     int n2, int i2, long double b);

/// p_H(i) = P(a mover entering via its household infects i of its h-1
/// housemates), i = 0..h-1, and p_W(i) likewise over w-1 colleagues.
struct FineTypeProbs {
    std::vector<double> p_h;
    std::vector<double> p_w;
};
FineTypeProbs fine_type_probs(const ModelParams& params);

/// omega[j][l] = E[exp(-nu I) 1{Q_H = j, Q_W = l}] for an initial infective
/// with Q_H ~ Bin(h-1, 1-e^{-b_H I}), Q_W ~ Bin(w-1, 1-e^{-b_W I}) given I.
/// b_H, b_W are the per-pair rates, or beta_H, beta_W when `unprimed` is set.
std::vector<std::vector<double>> seed_contact_weights(const ModelParams& params, double nu, bool unprimed = false);

}  // namespace hwepi
