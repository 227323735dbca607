// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace bcurrent {

namespace {

constexpr double kPi = std::numbers::pi;

double q_of(double x, double eps) { return x * x + 2.0 * x * eps + 2.0 * eps * eps; }

/// Least squares with column scaling; returns coefficients and RMS residual.
Eigen::VectorXd lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double& rms) {
  Eigen::VectorXd scale(A.cols());
  Eigen::MatrixXd As = A;
  for (int c = 0; c < A.cols(); ++c) {
    scale(c) = std::max(A.col(c).cwiseAbs().maxCoeff(), 1e-300);
    As.col(c) /= scale(c);
  }
  Eigen::VectorXd x = As.colPivHouseholderQr().solve(y);
  rms = std::sqrt((As * x - y).squaredNorm() / static_cast<double>(y.size()));
  return x.cwiseQuotient(scale);
}

Classification combine(Classification a, Classification b) {
  auto rank = [](Classification c) {
    switch (c) {
      case Classification::PowerDivergent: return 3;
      case Classification::LogDivergent: return 2;
      case Classification::Undetermined: return 1;
      case Classification::Convergent: return 0;
    }
    return 1;
  };
  return rank(a) >= rank(b) ? a : b;
}

double integrate_1d(const std::function<double(double)>& g, double eps, const QuadratureSpec& spec) {
  RefineTarget t;
  t.value[0] = 0.0;
  t.mask = 1u;
  t.depth = std::max(spec.corner_refine_depth, static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 2);
  const auto r = integrate_box(1, {0.0, 0, 0, 0}, {1.0, 0, 0, 0}, [&](const RVec& s) { return cplx(g(s[0])); },
                               spec, {t});
  return r.value.real();
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::Const: return "CONST";
    case Model::ConstLog: return "CONST+LOG";
    case Model::ConstPow1: return "CONST+POW1";
    case Model::ConstLogPow1: return "CONST+LOG+POW1";
  }
  return "?";
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Convergent: return "CONVERGENT";
    case Classification::LogDivergent: return "LOG_DIVERGENT";
    case Classification::PowerDivergent: return "POWER_DIVERGENT";
    case Classification::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

const char* existence_name(Existence e) {
  switch (e) {
    case Existence::ExistsNumerically: return "EXISTS_NUMERICALLY";
    case Existence::FailsNumerically: return "FAILS_NUMERICALLY";
    case Existence::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

AsymptoticFit fit_models(const std::vector<PairingSample>& samples, int window) {
  if (samples.size() < 6) throw Error(ErrorCode::TooFewSamples, "asymptotic fit needs at least 6 samples");
  if (window < 3) throw Error(ErrorCode::InvalidArgument, "fit window must be at least 3");
  const int n = std::min<int>(window, static_cast<int>(samples.size()));
  const std::size_t first = samples.size() - static_cast<std::size_t>(n);
  AsymptoticFit fit;
  fit.window = n;
  double eps_min = INFINITY;
  for (std::size_t i = first; i < samples.size(); ++i) {
    fit.scale = std::max(fit.scale, std::abs(samples[i].value));
    eps_min = std::min(eps_min, samples[i].epsilon);
  }
  const double scale = std::max(fit.scale, 1e-300);

  for (int ch = 0; ch < 2; ++ch) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const cplx v = samples[first + static_cast<std::size_t>(i)].value;
      y(i) = ch == 0 ? v.real() : v.imag();
    }
    ChannelFit best;
    double best_score = INFINITY;
    for (Model m : {Model::Const, Model::ConstLog, Model::ConstPow1, Model::ConstLogPow1}) {
      const bool has_log = m == Model::ConstLog || m == Model::ConstLogPow1;
      const bool has_pow = m == Model::ConstPow1 || m == Model::ConstLogPow1;
      const int cols = 1 + (has_log ? 1 : 0) + (has_pow ? 1 : 0);
      if (cols > n) continue;
      Eigen::MatrixXd A(n, cols);
      for (int i = 0; i < n; ++i) {
        const double e = samples[first + static_cast<std::size_t>(i)].epsilon;
        int c = 0;
        A(i, c++) = 1.0;
        if (has_log) A(i, c++) = std::log(e);
        if (has_pow) A(i, c++) = 1.0 / e;
      }
      double rms = 0.0;
      const Eigen::VectorXd x = lsq(A, y, rms);
      const double score = std::max(rms, 1e-12 * scale) * std::pow(10.0, cols - 1);
      if (score < best_score) {
        best_score = score;
        best = ChannelFit{};
        best.model = m;
        int c = 0;
        best.a = x(c++);
        if (has_log) best.b = x(c++);
        if (has_pow) best.c = x(c++);
        best.residual = rms;
      }
    }
    const bool log_sig = std::abs(best.b) > 1e-3 * scale;
    const bool pow_sig = std::abs(best.c) > 1e-3 * scale * eps_min;
    if (best.residual > 0.05 * scale)
      best.classification = Classification::Undetermined;
    else if (pow_sig)
      best.classification = Classification::PowerDivergent;
    else if (log_sig)
      best.classification = Classification::LogDivergent;
    else
      best.classification = Classification::Convergent;
    fit.channels[static_cast<std::size_t>(ch)] = best;
    fit.residual = std::max(fit.residual, best.residual);
  }
  fit.classification = combine(fit.channels[0].classification, fit.channels[1].classification);
  fit.model = fit.channels[0].classification == fit.classification ? fit.channels[0].model : fit.channels[1].model;
  if (fit.classification == Classification::Convergent) fit.limit = richardson_limit(samples);
  return fit;
}

cplx richardson_limit(const std::vector<PairingSample>& samples) {
  if (samples.size() < 4) throw Error(ErrorCode::TooFewSamples, "Richardson extrapolation needs 4 samples");
  const std::size_t first = samples.size() - 4;
  Eigen::Matrix4d A;
  Eigen::Vector4d yr, yi;
  for (int i = 0; i < 4; ++i) {
    const auto& s = samples[first + static_cast<std::size_t>(i)];
    const double e = s.epsilon;
    A(i, 0) = 1.0;
    A(i, 1) = e;
    A(i, 2) = e * std::log(e);
    A(i, 3) = e * e;
    yr(i) = s.value.real();
    yi(i) = s.value.imag();
  }
  Eigen::Vector4d scale;
  for (int c = 0; c < 4; ++c) {
    scale(c) = std::max(A.col(c).cwiseAbs().maxCoeff(), 1e-300);
    A.col(c) /= scale(c);
  }
  const auto qr = A.fullPivHouseholderQr();
  const Eigen::Vector4d xr = qr.solve(yr), xi = qr.solve(yi);
  return {xr(0) / scale(0), xi(0) / scale(0)};
}

Existence classify_bc_existence(const std::vector<AsymptoticFit>& fits) {
  if (fits.empty()) return Existence::Undetermined;
  bool all_convergent = true;
  for (const auto& f : fits) {
    if (f.classification == Classification::LogDivergent || f.classification == Classification::PowerDivergent)
      return Existence::FailsNumerically;
    all_convergent = all_convergent && f.classification == Classification::Convergent;
  }
  return all_convergent ? Existence::ExistsNumerically : Existence::Undetermined;
}

double antiderivative_I(double x, double eps) {
  const double q = q_of(x, eps);
  return 0.5 * std::log(q) - 2.0 * std::atan((x + eps) / eps) + eps * x / q;
}

double antiderivative_II(double x, double eps) {
  return std::atan((x + eps) / eps) / eps + eps / q_of(x, eps);
}

double closed_form_I(double eps) { return antiderivative_I(1.0, eps) - antiderivative_I(0.0, eps); }

double closed_form_II(double eps) {
  return 2.0 * eps * (antiderivative_II(1.0, eps) - antiderivative_II(0.0, eps));
}

cplx closed_form_segment(double eps) {
  const cplx c = eps * cplx(1.0, 1.0);
  return std::log((1.0 + c) / c) + c / (1.0 + c) - 1.0;
}

double quadrature_I(double eps, const QuadratureSpec& spec) {
  return integrate_1d([eps](double x) { const double q = q_of(x, eps); return x * x * x / (q * q); }, eps, spec);
}

double quadrature_II(double eps, const QuadratureSpec& spec) {
  return 2.0 * eps *
         integrate_1d([eps](double x) { const double q = q_of(x, eps); return x * x / (q * q); }, eps, spec);
}

cplx quadrature_segment(double eps, const QuadratureSpec& spec) {
  const cplx c = eps * cplx(1.0, 1.0);
  RefineTarget t;
  t.mask = 1u;
  t.depth = std::max(spec.corner_refine_depth, static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 2);
  return integrate_box(1, {0.0, 0, 0, 0}, {1.0, 0, 0, 0},
                       [c](const RVec& s) { return s[0] / ((s[0] + c) * (s[0] + c)); }, spec, {t})
      .value;
}

std::vector<AntiderivativeCandidate> antiderivative_candidates() {
  using LD = long double;
  auto q = [](LD x, LD e) { return x * x + 2 * x * e + 2 * e * e; };
  auto fI = [q](LD x, LD e) { return 0.5L * std::log(q(x, e)) - 2 * std::atan((x + e) / e) + e * x / q(x, e); };
  return {
      {"I.as_given", "I", fI},
      {"II.as_given", "II", [q](LD x, LD e) { return std::atan((x + e) / e) / e + e * e / q(x, e); }},
      {"I.rederived", "I", fI},
      {"II.rederived", "II", [q](LD x, LD e) { return std::atan((x + e) / e) / e + e / q(x, e); }},
  };
}

std::vector<AntiderivativeCheck> verify_antiderivatives(const std::vector<double>& xs,
                                                        const std::vector<double>& epss) {
  std::vector<AntiderivativeCheck> out;
  for (const auto& cand : antiderivative_candidates()) {
    AntiderivativeCheck chk;
    chk.name = cand.name;
    chk.target = cand.target;
    for (double x : xs) {
      if (x < 1e-3) throw Error(ErrorCode::InvalidArgument, "antiderivative grid needs x >= 1e-3");
      for (double e : epss) {
        const long double h = 1e-3L * std::min(x, e), xl = x, el = e;
        const auto& F = cand.F;
        const double d = static_cast<double>(
            (-F(xl + 2 * h, el) + 8 * F(xl + h, el) - 8 * F(xl - h, el) + F(xl - 2 * h, el)) / (12 * h));
        const double q = q_of(x, e);
        const double target = (cand.target == "I" ? x * x * x : x * x) / (q * q);
        chk.max_rel_error = std::max(chk.max_rel_error, std::abs(d - target) / std::abs(target));
      }
    }
    chk.pass = chk.max_rel_error <= 1e-5;
    out.push_back(chk);
  }
  return out;
}

std::vector<OracleConflict> oracle_conflicts(const QuadratureSpec& spec) {
  auto agree = [](double a, double r, double q, double tol) {
    const bool ga = std::abs(a - q) <= tol * std::max(1.0, std::abs(q));
    const bool gr = std::abs(r - q) <= tol * std::max(1.0, std::abs(q));
    return std::string(ga && gr ? "both" : ga ? "as_given" : gr ? "rederived" : "neither");
  };
  std::vector<OracleConflict> out;
  for (double e : {1e-1, 1e-2}) {
    OracleConflict c;
    c.quantity = "I(eps)";
    c.epsilon = e;
    c.as_given = 0.5 * std::log(0.5 / (e * e) + 1.0 / e + 1.0) - 2.0 * std::atan(1.0 / e + 1.0) + kPi / 4.0 +
                 e / (1.0 + 2.0 * e + e * e);
    c.rederived = closed_form_I(e);
    c.quadrature = quadrature_I(e, spec);
    c.agrees_with = agree(c.as_given, c.rederived, c.quadrature, 1e-8);
    out.push_back(c);
  }
  for (double e : {1e-1, 1e-2}) {
    OracleConflict c;
    c.quantity = "II(eps)";
    c.epsilon = e;
    c.as_given = 2.0 * (std::atan(1.0 / e + 1.0) - kPi / 4.0) + 2.0 * e * (e * e / (1.0 + 2.0 * e + 2.0 * e * e) - 0.5);
    c.rederived = closed_form_II(e);
    c.quadrature = quadrature_II(e, spec);
    c.agrees_with = agree(c.as_given, c.rederived, c.quadrature, 1e-8);
    out.push_back(c);
  }
  // Limits from quadrature sequences.
  std::vector<PairingSample> ii, seg;
  for (int k = 0; k < 10; ++k) {
    const double e = 1e-2 * std::ldexp(1.0, -k);
    PairingSample a;
    a.epsilon = e;
    a.value = quadrature_II(e, spec);
    ii.push_back(a);
    PairingSample b;
    b.epsilon = e;
    b.value = quadrature_segment(e, spec);
    seg.push_back(b);
  }
  {
    OracleConflict c;
    c.quantity = "lim II";
    c.as_given = kPi / 2.0;
    c.rederived = kPi / 2.0 - 1.0;
    c.quadrature = richardson_limit(ii).real();
    c.agrees_with = agree(c.as_given, c.rederived, c.quadrature, 1e-6);
    out.push_back(c);
  }
  {
    OracleConflict c;
    c.quantity = "lim Im segment";
    c.as_given = -kPi / 4.0;
    c.rederived = closed_form_segment(1e-12).imag();
    c.quadrature = richardson_limit(seg).imag();
    c.agrees_with = agree(c.as_given, c.rederived, c.quadrature, 1e-6);
    out.push_back(c);
  }
  return out;
}

}  // namespace bcurrent
