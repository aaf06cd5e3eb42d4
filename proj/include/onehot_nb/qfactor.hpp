#pragma once

// Closed-form analysis of the PoB distortion factor Q^{-j} and of the
// effective evidence f_j(theta) = theta_j * Q^{-j}(theta).
//
// For fixed theta_j, Q^{-j} is smallest (= theta_j) at the simplex corners and
// largest at the centre theta_i = (1 - theta_j)/(K - 1). That sandwiches f_j
// between lower_bound(theta_j) = theta_j^2 and upper_bound(theta_j, K).

#include <cstddef>

#include "onehot_nb/simplex.hpp"

namespace onehot_nb {

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

double f_j(const ProbVector& theta, std::size_t j);

double lower_bound(double theta_j);
double upper_bound(double theta_j, std::size_t k);

/// Maximum of Q^{-j} over the simplex with theta_j held fixed:
/// ((K - 2 + theta_j) / (K - 1))^(K - 1).
double q_optimum(double theta_j, std::size_t k);

/// The maximizing configuration: theta_j at index j, the rest equal.
ProbVector centre_configuration(double theta_j, std::size_t j, std::size_t k);

/// A minimizing configuration: theta_j at index j, 1 - theta_j on one other index.
ProbVector corner_configuration(double theta_j, std::size_t j, std::size_t k);

/// Range of f_j(theta_c) / f_j(theta_d) over all completions of the two
/// vectors: [l(theta_jc)/u(theta_jd), u(theta_jc)/l(theta_jd)].
/// Both arguments must lie in (0, 1].
BoundPair ratio_bounds(double theta_jc, double theta_jd, std::size_t k);

/// True when theta_jc > ((K - 2 + theta_jd)/(K - 1))^(K - 1); then every
/// realizable f_j ratio is strictly larger than theta_jc / theta_jd.
bool extremeness_guaranteed(double theta_jc, double theta_jd, std::size_t k);

}  // namespace onehot_nb
