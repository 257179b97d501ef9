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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liouvep/lindblad.hpp"

// Qubit presets and their closed-form spectra.
//
// Example 1: H = (omega/2) sigma_z with a sigma_x channel of rate gamma_x.
// Example 2: H = (omega/2) sigma_x with a sigma_- channel of rate gamma_-.
//
// Nothing in this header calls the numerical eigensolver; the formulas are
// meant to be checked against it.
namespace liouvep::models {

struct Example1Params {
  double omega = 1.0;
  double gamma_x = 0.0;
  double q = 1.0;
};

struct Example2Params {
  double omega = 1.0;
  double gamma_minus = 0.0;
  double q = 1.0;
};

struct ClosedFormSpectrum {
  std::vector<Complex> eigenvalues;
  // Named intermediate quantities (Omega, Omega', zeta, beta, F0, D, ...).
  std::map<std::string, Complex> auxiliary;
  // Same order as eigenvalues when present; unnormalized.
  std::vector<ComplexMatrix> eigenmatrices;
};

LindbladModel example1_model(const Example1Params& p);

/// {-g(1-q), -g + W', -g - W', -g(1+q)} with W' = sqrt(q^2 g^2 - omega^2).
ClosedFormSpectrum example1_hybrid_spectrum(const Example1Params& p);

/// omega / q, or nullopt for q == 0 (the coalescence moves to infinity).
std::optional<double> example1_ep(double q, double omega = 1.0);

/// One-parameter family [[0, a], [i a - i, 0]] of generalized eigenmatrices at
/// the q = 1, gamma_x = omega point.
ComplexMatrix example1_generalized_eigenmatrix(Complex a);

LindbladModel example2_model(const Example2Params& p);

/// NHH eigenvalues h_{1,2} = (-i g -/+ zeta)/4, zeta = sqrt(4 omega^2 - g^2).
/// eigenmatrices hold the matching eigenvectors as 2x1 columns.
ClosedFormSpectrum example2_nhh_spectrum(const Example2Params& p);

/// [a, i(4 + a)]: generalized eigenvectors at g = 2 omega for the eigenvector
/// normalized as [2 i omega, -2 omega].
ComplexVector example2_nhh_generalized_eigenvector(Complex a);

/// Full Liouvillian (q = 1): {0, -g/2, -3g/4 + beta/4, -3g/4 - beta/4} with
/// beta = sqrt(g^2 - 16 omega^2), and the printed eigenmatrices.
ClosedFormSpectrum example2_liouvillian_spectrum(const Example2Params& p);

/// Generalized eigenmatrix 4 diag(1, -1) at the g = 4 omega point.
ComplexMatrix example2_lep_generalized_eigenmatrix();

/// Position of the coalescence of the hybrid generator as a function of q,
/// gamma(q) = sqrt(2) f^(-1/2) (3 f^2 + 3 q^2 + 2 f)^(1/2) omega with
/// f = q^(2/3) (1 + sqrt(1 - q^2))^(1/3). Throws for q outside (0, 1].
double example2_hybrid_ep(double q, double omega = 1.0);

/// Which form of the cubic-root eigenvalues to evaluate. kAsPrinted uses the
/// published imaginary part i sqrt(3) (F0 - 2 D); kCorrected uses
/// i sqrt(3) (F0 - D / 6), which is what the cubic actually gives.
enum class AppendixVariant { kAsPrinted, kCorrected };

std::string to_string(AppendixVariant v);

/// Hybrid spectrum {-g/2 + 2 F0, -g/2, -g/2 - F0 +/- i sqrt(3) (...)} with
/// principal square and cube roots. Eigenmatrices are evaluated from the
/// published element formulas in both variants (index 1 is sigma_x).
ClosedFormSpectrum example2_hybrid_spectrum(const Example2Params& p,
                                            AppendixVariant variant = AppendixVariant::kAsPrinted);

}  // namespace liouvep::models
