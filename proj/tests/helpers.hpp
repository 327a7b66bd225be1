#pragma once

#include "imexrelax/tableau.hpp"

#include <Eigen/Dense>

#include <initializer_list>
#include <random>
#include <string>

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline imexrelax::ButcherTableau bt(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd c) {
    return {std::move(A), std::move(b), std::move(c)};
}

/// Forward Euler explicit part padded onto an arbitrary implicit tableau.
inline imexrelax::ImexTableau with_implicit(imexrelax::ButcherTableau impl, const std::string& name = "test") {
    const auto s = impl.stages();
    imexrelax::ButcherTableau ex{Eigen::MatrixXd::Zero(s, s), Eigen::VectorXd::Zero(s), Eigen::VectorXd::Zero(s)};
    ex.b(0) = 1.0;
    return {name, ex, std::move(impl)};
}

inline imexrelax::ImexTableau implicit_euler_pair() {
    return {"imex-euler", bt(mat({{0}}), vec({1}), vec({0})), bt(mat({{1}}), vec({1}), vec({1}))};
}

inline Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(gen);
    return v;
}

}  // namespace testutil
