// least_squares.hpp - thin wrapper over Eigen's Levenberg-Marquardt solver with
// a central-difference Jacobian (step 1e-4 relative to each parameter).

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qds {

struct LeastSquaresProblem {
    int parameters{0};
    int residuals{0};
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)> evaluate;
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    double cost{0.0};            // 0.5 * |r|^2
    int iterations{0};
    bool converged{false};
    std::vector<double> history; // cost after every iteration, starting value first
    Eigen::MatrixXd jacobian;    // at the solution
    std::optional<Eigen::MatrixXd> jtj_inverse;
    std::string status;
};

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, const Eigen::VectorXd& x0,
                                       int max_iterations = 200);

} // namespace qds
