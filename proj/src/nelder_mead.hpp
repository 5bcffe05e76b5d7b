// Small dense Nelder-Mead simplex minimizer.
#pragma once

#include <Eigen/Dense>
#include <functional>

namespace mpt {

struct NelderMeadOptions {
  double initial_step = 1.0;
  double ftol = 1e-4;      // absolute spread of simplex values
  int max_evals = 400;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double fval = 0.0;
  int n_evals = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {});

}  // namespace mpt
