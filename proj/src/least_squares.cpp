#include "qds/least_squares.hpp"

#include "qds/params.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <cmath>

namespace qds {

namespace {

struct Residuals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const LeastSquaresProblem* problem;

    int inputs() const { return problem->parameters; }
    int values() const { return problem->residuals; }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
        r.resize(problem->residuals);
        problem->evaluate(x, r);
        return r.allFinite() ? 0 : -1;
    }
};

using Diff = Eigen::NumericalDiff<Residuals, Eigen::Central>;

const char* describe(Eigen::LevenbergMarquardtSpace::Status s) {
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (s) {
    case RelativeReductionTooSmall: return "relative reduction below tolerance";
    case RelativeErrorTooSmall: return "relative step below tolerance";
    case RelativeErrorAndReductionTooSmall: return "step and reduction below tolerance";
    case CosinusTooSmall: return "gradient orthogonal to residuals";
    case TooManyFunctionEvaluation: return "too many function evaluations";
    case FtolTooSmall: return "ftol too small";
    case XtolTooSmall: return "xtol too small";
    case GtolTooSmall: return "gtol too small";
    case ImproperInputParameters: return "improper input parameters";
    case UserAsked: return "residual evaluation failed";
    default: return "running";
    }
}

} // namespace

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, const Eigen::VectorXd& x0,
                                       int max_iterations) {
    if (problem.parameters <= 0 || problem.residuals < problem.parameters) {
        throw ValidationError("data", "not enough residuals for the number of parameters");
    }
    Residuals functor{&problem};
    Diff diff(functor, 1e-8);
    Eigen::LevenbergMarquardt<Diff> lm(diff);
    lm.parameters.maxfev = 1000 * (problem.parameters + 1);

    LeastSquaresResult out;
    Eigen::VectorXd x = x0;
    using namespace Eigen::LevenbergMarquardtSpace;
    Status status = lm.minimizeInit(x);
    if (status == ImproperInputParameters) throw ValidationError("fit", "improper least-squares setup");
    {
        Eigen::VectorXd r(problem.residuals);
        functor(x, r);
        out.history.push_back(0.5 * r.squaredNorm());
    }
    int it = 0;
    do {
        status = lm.minimizeOneStep(x);
        ++it;
        out.history.push_back(0.5 * lm.fvec.squaredNorm());
    } while (status == Running && it < max_iterations);

    out.x = x;
    out.iterations = it;
    out.status = describe(status);
    out.converged = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                    status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall;
    Eigen::VectorXd r(problem.residuals);
    functor(x, r);
    out.cost = 0.5 * r.squaredNorm();

    Eigen::MatrixXd j(problem.residuals, problem.parameters);
    diff.df(x, j);
    out.jacobian = j;
    const Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) out.jtj_inverse = lu.inverse();
    return out;
}

} // namespace qds
