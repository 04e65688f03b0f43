#include "kondratiev/profiles.hpp"

#include <cmath>

#include "kondratiev/jet.hpp"

namespace kondratiev {

namespace {

void zeros(int K, double* out, double v0) {
  out[0] = v0;
  for (int k = 1; k <= K; ++k) out[k] = 0.0;
}

void copy_derivs(const Jet& j, int K, double* out) {
  double f = 1;
  for (int k = 0; k <= K; ++k) {
    if (k > 1) f *= k;
    out[k] = j.coeff(k) * f;
  }
}

// 32-point Gauss-Legendre on [0, 1]
struct GL32 {
  double x[32], w[32];
  GL32() {
    const int n = 32;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), pp = 0;
      for (int it = 0; it < 100; ++it) {
        double p1 = 1, p2 = 0;
        for (int k = 1; k <= n; ++k) {
          double p3 = p2;
          p2 = p1;
          p1 = ((2 * k - 1) * z * p2 - (k - 1) * p3) / k;
        }
        pp = n * (z * p1 - p2) / (z * z - 1);
        double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = 0.5 * (1 - z);
      w[i] = 1.0 / ((1 - z * z) * pp * pp);
    }
  }
};

}  // namespace

void smooth_step(double u, int K, double* out) {
  if (u <= 0) return zeros(K, out, 0.0);
  if (u >= 1) return zeros(K, out, 1.0);
  const JetLayout& L = JetLayout::get(1, K);
  Jet U = Jet::variable(L, 0, u);
  // w = 1/u - 1/(1-u); S = 1 / (1 + e^w), evaluated on the side where the exponential is <= 1
  Jet one_minus = Jet(L, 1.0) - U;
  Jet w = reciprocal(U) - reciprocal(one_minus);
  Jet s(L);
  if (w.value() <= 0) {
    Jet e = exp(w);
    e += 1.0;
    s = reciprocal(e);
  } else {
    Jet e = exp(-1.0 * w);
    Jet den = e;
    den += 1.0;
    s = e * reciprocal(den);
  }
  copy_derivs(s, K, out);
}

double smooth_step(double u) {
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  const double w = 1.0 / u - 1.0 / (1.0 - u);
  if (w <= 0) return 1.0 / (1.0 + std::exp(w));
  const double e = std::exp(-w);
  return e / (1.0 + e);
}

double step_integral(double u) {
  if (u <= 0) return 0.0;
  if (u >= 1) return 0.5 + (u - 1.0);
  static const GL32 q;
  // four panels resolve the flat start of S to round-off
  double s = 0;
  const double h = u / 4;
  for (int p = 0; p < 4; ++p)
    for (int i = 0; i < 32; ++i) s += q.w[i] * smooth_step(h * (p + q.x[i]));
  return h * s;
}

void partition_profile(double s, int K, double* out) {
  const double a = std::abs(s);
  if (a <= 0.25) return zeros(K, out, 1.0);
  if (a >= 0.75) return zeros(K, out, 0.0);
  double d[kMaxJetCoeffs];
  smooth_step(2 * (a - 0.25), K, d);
  out[0] = 1.0 - d[0];
  double scale = 1;
  for (int k = 1; k <= K; ++k) {
    scale *= (s < 0 ? -2.0 : 2.0);
    out[k] = -scale * d[k];
  }
}

double partition_profile(double s) {
  const double a = std::abs(s);
  if (a <= 0.25) return 1.0;
  if (a >= 0.75) return 0.0;
  return 1.0 - smooth_step(2 * (a - 0.25));
}

void cap_profile(double r, int K, double* out) {
  if (r <= 0.875) {
    zeros(K, out, r);
    if (K >= 1) out[1] = 1.0;
    return;
  }
  if (r >= 1.125) return zeros(K, out, 1.0);
  const double u = 4 * (r - 0.875);
  double d[kMaxJetCoeffs];
  smooth_step(u, K > 0 ? K - 1 : 0, d);
  out[0] = std::min(r - 0.25 * step_integral(u), 1.0);
  double scale = 1;
  for (int k = 1; k <= K; ++k) {
    out[k] = (k == 1 ? 1.0 : 0.0) - scale * d[k - 1];
    scale *= 4.0;
  }
}

void cutoff_profile(double r, int K, double* out) {
  if (r <= 1) return zeros(K, out, 1.0);
  if (r >= 1.5) return zeros(K, out, 0.0);
  double d[kMaxJetCoeffs];
  smooth_step(2 * (r - 1), K, d);
  out[0] = 1.0 - d[0];
  double scale = 1;
  for (int k = 1; k <= K; ++k) {
    scale *= 2.0;
    out[k] = -scale * d[k];
  }
}

void bump_profile(double s, int K, double* out) {
  if (s >= 1) return zeros(K, out, 0.0);
  const JetLayout& L = JetLayout::get(1, K);
  Jet t = Jet(L, 1.0) - Jet::variable(L, 0, s);
  Jet e = exp(-1.0 * reciprocal(t));
  copy_derivs(e, K, out);
}

}  // namespace kondratiev
