#pragma once

// One-dimensional C-infinity profiles; each fills out[k] = f^(k)(x), k = 0..K.

namespace kondratiev {

// S(u) = h(u) / (h(u) + h(1-u)), h(u) = exp(-1/u); S = 0 on u <= 0, 1 on u >= 1.
void smooth_step(double u, int K, double* out);
double smooth_step(double u);
// G(u) = int_0^u S, G(1) = 1/2
double step_integral(double u);

// theta: 1 on |s| <= 1/4, 0 on |s| >= 3/4, integer translates sum to one.
void partition_profile(double s, int K, double* out);
double partition_profile(double s);

// Smooth replacement of min(1, r): equal to r on r <= 7/8 and to 1 on r >= 9/8.
void cap_profile(double r, int K, double* out);

// Radial cutoff: 1 on r <= 1, 0 on r >= 3/2.
void cutoff_profile(double r, int K, double* out);

// exp(-1/(1-s)) for s < 1, 0 otherwise.
void bump_profile(double s, int K, double* out);

}  // namespace kondratiev
