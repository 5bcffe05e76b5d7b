#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mpt {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  const int d = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  int n_evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++n_evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (int i = 1; i <= d; ++i) xs[i][i - 1] += opts.initial_step;
  for (int i = 0; i <= d; ++i) fs[i] = eval(xs[i]);

  std::vector<int> order(d + 1);
  bool converged = false;
  while (n_evals < opts.max_evals) {
    for (int i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return fs[i] < fs[j]; });
    const int best = order[0], worst = order[d], second = order[d - 1];
    if (std::isfinite(fs[best]) && fs[worst] - fs[best] <= opts.ftol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= d;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - xs[worst]);
    const double fr = eval(xr);
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[worst] = xe; fs[worst] = fe;
      } else {
        xs[worst] = xr; fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr; fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Eigen::VectorXd xc =
          outside ? centroid + rho * (xr - centroid)
                  : centroid + rho * (xs[worst] - centroid);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = xc; fs[worst] = fc;
      } else {
        for (int i = 0; i <= d; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + sigma * (xs[i] - xs[best]);
          fs[i] = eval(xs[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= d; ++i)
    if (fs[i] < fs[best]) best = i;

  NelderMeadResult res;
  res.x = xs[best];
  res.fval = fs[best];
  res.n_evals = n_evals;
  res.converged = converged;
  return res;
}

}  // namespace mpt
