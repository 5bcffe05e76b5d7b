// Kaiser-windowed sinc interpolation for fractional delay and time scaling.
#pragma once

#include "signals.hpp"

namespace mpt {

// Zeroth-order modified Bessel function of the first kind (series).
double bessel_i0(double x);

// Band-limited value of x at fractional index pos; samples outside the
// vector are treated as zero. 2*half_taps+1 taps, Kaiser window.
double sinc_interp(const VectorXd& x, double pos, int half_taps = 15,
                   double kaiser_beta = 8.0);

// out[n] = s(beta * (n*dt - tau_s)) evaluated by windowed-sinc
// interpolation of the stored samples.
VectorXd resample_scaled(const SampledWaveform& s, double beta, double tau_s,
                         int n_out, int half_taps = 15,
                         double kaiser_beta = 8.0);

// Pure fractional delay by delay_samples.
VectorXd fractional_delay(const VectorXd& x, double delay_samples,
                          int half_taps = 15, double kaiser_beta = 8.0);

}  // namespace mpt
