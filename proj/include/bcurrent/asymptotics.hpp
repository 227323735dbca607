// SPDX-License-Identifier: Apache-2.0
//
// Convergence/divergence classification of pairing sequences, limit
// extraction, and the closed-form I/II/segment oracles with antiderivative
// self-checks.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcurrent/pairing.hpp"

namespace bcurrent {

enum class Model { Const, ConstLog, ConstPow1, ConstLogPow1 };
enum class Classification { Convergent, LogDivergent, PowerDivergent, Undetermined };
enum class Existence { ExistsNumerically, FailsNumerically, Undetermined };

const char* model_name(Model m);
const char* classification_name(Classification c);
const char* existence_name(Existence e);

/// Fit of one real channel: y = a + b ln(eps) + c / eps (unused terms 0).
struct ChannelFit {
  Model model = Model::Const;
  double a = 0.0, b = 0.0, c = 0.0;
  double residual = 0.0;  // RMS misfit
  Classification classification = Classification::Undetermined;
};

struct AsymptoticFit {
  std::array<ChannelFit, 2> channels;  // real, imaginary
  Model model = Model::Const;          // model of the deciding channel
  Classification classification = Classification::Undetermined;
  double residual = 0.0;  // max over channels
  double scale = 0.0;     // max |F| over the window
  int window = 0;
  std::optional<cplx> limit;  // iff CONVERGENT
};

/// Least squares against {1}, {1, ln eps}, {1, 1/eps}, {1, ln eps, 1/eps} on
/// the last `window` samples; score = residual * 10^(extra terms).
/// Throws TooFewSamples for fewer than 6 samples.
AsymptoticFit fit_models(const std::vector<PairingSample>& samples, int window = 8);

/// Generalized Richardson extrapolation on the last 4 samples with basis
/// {1, eps, eps ln eps, eps^2}.
cplx richardson_limit(const std::vector<PairingSample>& samples);

Existence classify_bc_existence(const std::vector<AsymptoticFit>& fits);

/// Antiderivatives in x for fixed eps; q = x^2 + 2 x eps + 2 eps^2.
double antiderivative_I(double x, double eps);   // of x^3 / q^2
double antiderivative_II(double x, double eps);  // of x^2 / q^2

/// int_0^1 x^3 / ((x+eps)^2 + eps^2)^2 dx.
double closed_form_I(double eps);
/// 2 eps int_0^1 x^2 / ((x+eps)^2 + eps^2)^2 dx.
double closed_form_II(double eps);
/// int_0^1 x / (x + c)^2 dx with c = eps (1 + i).
cplx closed_form_segment(double eps);

/// Direct adaptive quadrature of the same integrals.
double quadrature_I(double eps, const QuadratureSpec& spec = {});
double quadrature_II(double eps, const QuadratureSpec& spec = {});
cplx quadrature_segment(double eps, const QuadratureSpec& spec = {});

struct AntiderivativeCandidate {
  std::string name;
  std::string target;  // "I" (x^3/q^2) or "II" (x^2/q^2)
  std::function<long double(long double, long double)> F;  // F(x, eps)
};

/// Two candidates as given alongside the derivation being checked plus the
/// re-derived forms.
std::vector<AntiderivativeCandidate> antiderivative_candidates();

struct AntiderivativeCheck {
  std::string name;
  std::string target;
  double max_rel_error = 0.0;
  bool pass = false;
};

/// 5-point central differences with h = 1e-3 min(x, eps); FAIL above 1e-5.
std::vector<AntiderivativeCheck> verify_antiderivatives(const std::vector<double>& xs,
                                                        const std::vector<double>& epss);

struct OracleConflict {
  std::string quantity;
  double epsilon = 0.0;  // 0 for limits
  double as_given = 0.0;
  double rederived = 0.0;
  double quadrature = 0.0;
  std::string agrees_with;  // "as_given", "rederived", "both", "neither"
};

/// Cross-checks of the closed expressions and limits against quadrature.
std::vector<OracleConflict> oracle_conflicts(const QuadratureSpec& spec = {});

}  // namespace bcurrent
