#include "onehot_nb/qfactor.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "onehot_nb/error.hpp"
#include "onehot_nb/nb_models.hpp"

namespace onehot_nb {

namespace {

void check_unit(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorCode::OutOfUnitInterval, "theta_j must lie in [0,1], got " + std::to_string(t));
    }
}

void check_k(std::size_t k) {
    if (k < 2) throw Error(ErrorCode::BadK, "K must be >= 2, got " + std::to_string(k));
}

void check_ratio_arg(double t) {
    check_unit(t);
    if (t == 0.0) throw Error(ErrorCode::ZeroTheta, "ratio is undefined for theta = 0");
}

}  // namespace

double f_j(const ProbVector& theta, std::size_t j) { return theta.at(j) * q_factor(theta, j); }

double lower_bound(double theta_j) {
    check_unit(theta_j);
    return theta_j * theta_j;
}

double upper_bound(double theta_j, std::size_t k) { return theta_j * q_optimum(theta_j, k); }

double q_optimum(double theta_j, std::size_t k) {
    check_unit(theta_j);
    check_k(k);
    const double km1 = static_cast<double>(k - 1);
    const double base = (km1 - 1.0 + theta_j) / km1;
    double q = 1.0;
    for (std::size_t i = 0; i < k - 1; ++i) q *= base;
    return q;
}

ProbVector centre_configuration(double theta_j, std::size_t j, std::size_t k) {
    check_unit(theta_j);
    check_k(k);
    if (j >= k) throw Error(ErrorCode::IndexOutOfRange, "value index out of range");
    std::vector<double> v(k, (1.0 - theta_j) / static_cast<double>(k - 1));
    v[j] = theta_j;
    return ProbVector(v);
}

ProbVector corner_configuration(double theta_j, std::size_t j, std::size_t k) {
    check_unit(theta_j);
    check_k(k);
    if (j >= k) throw Error(ErrorCode::IndexOutOfRange, "value index out of range");
    std::vector<double> v(k, 0.0);
    v[j] = theta_j;
    v[j == 0 ? 1 : 0] = 1.0 - theta_j;
    return ProbVector(v);
}

BoundPair ratio_bounds(double theta_jc, double theta_jd, std::size_t k) {
    check_ratio_arg(theta_jc);
    check_ratio_arg(theta_jd);
    check_k(k);
    return {lower_bound(theta_jc) / upper_bound(theta_jd, k), upper_bound(theta_jc, k) / lower_bound(theta_jd)};
}

bool extremeness_guaranteed(double theta_jc, double theta_jd, std::size_t k) {
    check_ratio_arg(theta_jc);
    check_ratio_arg(theta_jd);
    check_k(k);
    return theta_jc > q_optimum(theta_jd, k);
}

}  // namespace onehot_nb
