// Copyright 2026 The liouvep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "liouvep/models.hpp"

#include <cmath>
#include <stdexcept>

namespace liouvep::models {

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Principal square root of a real argument, kept complex.
Complex csqrt(double x) { return std::sqrt(Complex(x, 0.0)); }

// Appendix quantities D and F0 for the hybrid Example-2 generator.
struct CubicTerms {
  Complex d;
  Complex f0;
};

CubicTerms cubic_terms(double w, double g, double q) {
  const double c = g * g - 4.0 * w * w;
  const double radicand = 108.0 * q * q * g * g * std::pow(w, 4) - c * c * c;
  const Complex inner = 54.0 * q * g * w * w + 3.0 * std::sqrt(3.0) * csqrt(radicand);
  const Complex d = std::pow(inner, 1.0 / 3.0);
  Complex f0 = d / 12.0;
  // At q = 0, g = 2 omega both D and g^2 - 4 omega^2 vanish; the limit is F0 = 0.
  if (c != 0.0) f0 += c / (4.0 * d);
  return {d, f0};
}

}  // namespace

LindbladModel example1_model(const Example1Params& p) {
  return LindbladModel(0.5 * p.omega * sigma_z(), {JumpChannel{sigma_x(), p.gamma_x, 1.0}});
}

ClosedFormSpectrum example1_hybrid_spectrum(const Example1Params& p) {
  const double w = p.omega, g = p.gamma_x, q = p.q;
  const Complex big_omega = csqrt(g * g - w * w);
  const Complex omega_q = csqrt(q * q * g * g - w * w);

  ClosedFormSpectrum out;
  out.auxiliary["Omega"] = big_omega;
  out.auxiliary["Omega_prime"] = omega_q;
  out.eigenvalues = {-g * (1.0 - q), -g + omega_q, -g - omega_q, -g * (1.0 + q)};

  out.eigenmatrices.push_back(ComplexMatrix::Identity(2, 2) * 0.5);
  for (double s : {1.0, -1.0}) {
    const Complex mu = s * omega_q;
    ComplexMatrix a = mat2(0.0, -kI * w + mu, q * g, 0.0);
    ComplexMatrix b = mat2(0.0, q * g, mu + kI * w, 0.0);
    out.eigenmatrices.push_back(a.norm() >= b.norm() ? a : b);
  }
  out.eigenmatrices.push_back(mat2(-1.0, 0.0, 0.0, 1.0));
  return out;
}

std::optional<double> example1_ep(double q, double omega) {
  if (q < 0.0) throw std::invalid_argument("example1_ep: q must be >= 0");
  if (q == 0.0) return std::nullopt;
  return omega / q;
}

ComplexMatrix example1_generalized_eigenmatrix(Complex a) {
  return mat2(0.0, a, kI * a - kI, 0.0);
}

LindbladModel example2_model(const Example2Params& p) {
  return LindbladModel(0.5 * p.omega * sigma_x(),
                       {JumpChannel{sigma_minus(), p.gamma_minus, 1.0}});
}

ClosedFormSpectrum example2_nhh_spectrum(const Example2Params& p) {
  const double w = p.omega, g = p.gamma_minus;
  const Complex zeta = csqrt(4.0 * w * w - g * g);
  ClosedFormSpectrum out;
  out.auxiliary["zeta"] = zeta;
  out.eigenvalues = {0.25 * (-kI * g - zeta), 0.25 * (-kI * g + zeta)};
  for (double s : {1.0, -1.0}) {
    ComplexMatrix v(2, 1);
    v << kI * g + s * zeta, -2.0 * w;
    out.eigenmatrices.push_back(v);
  }
  return out;
}

ComplexVector example2_nhh_generalized_eigenvector(Complex a) {
  ComplexVector v(2);
  v << a, kI * (4.0 + a);
  return v;
}

ClosedFormSpectrum example2_liouvillian_spectrum(const Example2Params& p) {
  const double w = p.omega, g = p.gamma_minus;
  const Complex beta = csqrt(g * g - 16.0 * w * w);
  ClosedFormSpectrum out;
  out.auxiliary["beta"] = beta;
  out.eigenvalues = {0.0, -g / 2.0, -0.75 * g + beta / 4.0, -0.75 * g - beta / 4.0};

  // The published steady state is written with |down> first.
  const double norm = g * g + 2.0 * w * w;
  const ComplexMatrix ss_down_first =
      mat2(g * g + w * w, kI * g * w, -kI * g * w, w * w) / norm;
  out.eigenmatrices.push_back(sigma_x() * ss_down_first * sigma_x());
  out.eigenmatrices.push_back(sigma_x());
  for (double s : {1.0, -1.0})
    out.eigenmatrices.push_back(mat2(-g + s * beta, 4.0 * kI * w, -4.0 * kI * w, g - s * beta));
  return out;
}

ComplexMatrix example2_lep_generalized_eigenmatrix() { return 4.0 * mat2(1.0, 0.0, 0.0, -1.0); }

double example2_hybrid_ep(double q, double omega) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("example2_hybrid_ep: q must lie in (0, 1]");
  const double f = std::pow(q, 2.0 / 3.0) * std::cbrt(1.0 + std::sqrt(1.0 - q * q));
  return std::sqrt(2.0) / std::sqrt(f) * std::sqrt(3.0 * f * f + 3.0 * q * q + 2.0 * f) * omega;
}

std::string to_string(AppendixVariant v) {
  return v == AppendixVariant::kAsPrinted ? "as_printed" : "corrected";
}

ClosedFormSpectrum example2_hybrid_spectrum(const Example2Params& p, AppendixVariant variant) {
  const double w = p.omega, g = p.gamma_minus, q = p.q;
  const auto [d, f0] = cubic_terms(w, g, q);
  const Complex split = variant == AppendixVariant::kAsPrinted
                            ? kI * std::sqrt(3.0) * (f0 - 2.0 * d)
                            : kI * std::sqrt(3.0) * (f0 - d / 6.0);

  ClosedFormSpectrum out;
  out.auxiliary["D"] = d;
  out.auxiliary["F0"] = f0;
  out.auxiliary["u_plus"] = 1.0 + std::sqrt(3.0);
  out.auxiliary["u_minus"] = 1.0 - std::sqrt(3.0);
  out.eigenvalues = {-g / 2.0 + 2.0 * f0, -g / 2.0, -g / 2.0 - f0 + split, -g / 2.0 - f0 - split};

  // Element formulas as published (gamma read as gamma_-).
  const double up = 1.0 + std::sqrt(3.0), um = 1.0 - std::sqrt(3.0);
  const double w2 = w * w, g2 = g * g, g3 = g2 * g, c = g2 - 4.0 * w2;
  const Complex d2 = d * d, d3 = d2 * d;

  const Complex r00 = -1.0 / 6.0 * (d3 - 54.0 * q * g * w2) * (3.0 * g - d) +
                      1.5 * g3 * (g - d) + g2 * (d2 - w2 * (27.0 * q + 12.0)) +
                      3.0 * g * w2 * d * (3.0 * q + 2.0) + 24.0 * w2 - w2 * d2;
  const Complex r01 = kI * 3.0 * w * d2 * (4.0 * f0 - g * (2.0 * q + 1.0));
  const Complex r11 = 6.0 * d2 * (4.0 * g * q * f0 + w2 * d);
  out.eigenmatrices.push_back(mat2(r00, r01, -r01, r11));

  out.eigenmatrices.push_back(sigma_x());

  const Complex s00 = 4.0 * d2 * (g2 - w2) - up * (d3 - 9.0 * g3 + 36.0 * g * w2) * d / 3.0 +
                      um * (g * d3 - 16.0 * w2 * g2 - 3.0 * c * c);
  const Complex s01 = -kI * w * d * (d2 * um + 6.0 * g * d * (2.0 * q + 1.0) + 3.0 * up * c);
  const Complex s11 = -2.0 * d * (um * q * g * d2 - 6.0 * w2 * d + 3.0 * up * q * g * c);
  out.eigenmatrices.push_back(mat2(s00, s01, -s01, s11));
  out.eigenmatrices.push_back(mat2(s00, -s01, s01, s11));
  return out;
}

}  // namespace liouvep::models
