#include "resample.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace mpt {

double bessel_i0(double x) {
  const double half = x / 2.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

namespace {

constexpr int kTableSize = 4096;

// Kaiser window sampled on |frac| in [0, 1], normalized by I0(beta).
const std::vector<double>& kaiser_table(double beta) {
  static std::mutex mu;
  static std::map<double, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(beta);
  if (it != cache.end()) return it->second;
  std::vector<double> tab(kTableSize + 1);
  const double inv_i0 = 1.0 / bessel_i0(beta);
  for (int i = 0; i <= kTableSize; ++i) {
    const double frac = static_cast<double>(i) / kTableSize;
    tab[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - frac * frac))) *
             inv_i0;
  }
  return cache.emplace(beta, std::move(tab)).first->second;
}

inline double window_at(const std::vector<double>& tab, double frac) {
  const double pos = std::abs(frac) * kTableSize;
  const int i = static_cast<int>(pos);
  if (i >= kTableSize) return 0.0;
  const double t = pos - i;
  return tab[i] * (1.0 - t) + tab[i + 1] * t;
}

}  // namespace

double sinc_interp(const VectorXd& x, double pos, int half_taps,
                   double kaiser_beta) {
  const int len = static_cast<int>(x.size());
  const int center = static_cast<int>(std::floor(pos));
  if (center + half_taps < 0 || center - half_taps + 1 >= len) return 0.0;
  const std::vector<double>& tab = kaiser_table(kaiser_beta);

  const double fractional = pos - center;
  // On-grid fast path; neighboring sinc taps vanish exactly.
  if (fractional < 1e-12 && center >= 0 && center < len) return x[center];

  // sin(pi*(pos - m)) = parity(center - m) * sin(pi*fractional)
  const double sp = std::sin(M_PI * fractional);
  double acc = 0.0;
  const int lo = std::max(0, center - half_taps + 1);
  const int hi = std::min(len - 1, center + half_taps);
  for (int m = lo; m <= hi; ++m) {
    const double d = pos - m;
    const double parity = ((center - m) & 1) ? -1.0 : 1.0;
    acc += x[m] * parity * sp / (M_PI * d) * window_at(tab, d / half_taps);
  }
  return acc;
}

VectorXd resample_scaled(const SampledWaveform& s, double beta, double tau_s,
                         int n_out, int half_taps, double kaiser_beta) {
  VectorXd out(n_out);
  const double inv_dt = 1.0 / s.dt_s;
  for (int n = 0; n < n_out; ++n) {
    const double pos = beta * (n - tau_s * inv_dt);
    out[n] = sinc_interp(s.samples, pos, half_taps, kaiser_beta);
  }
  return out;
}

VectorXd fractional_delay(const VectorXd& x, double delay_samples,
                          int half_taps, double kaiser_beta) {
  VectorXd out(x.size());
  for (int n = 0; n < x.size(); ++n)
    out[n] = sinc_interp(x, n - delay_samples, half_taps, kaiser_beta);
  return out;
}

}  // namespace mpt
