#pragma once

#include <Eigen/Core>

namespace nlds::detail {

/// Classical four-stage step for y' = f(y).
template <typename F>
Eigen::VectorXd rk4_step(const F& f, const Eigen::VectorXd& y, double dt) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = f(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Stability polynomial of the step: y_{n+1} = R(dt*lambda) y_n for y' = lambda y.
inline double rk4_amplification(double z) {
    return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

}  // namespace nlds::detail
