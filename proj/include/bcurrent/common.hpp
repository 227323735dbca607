// SPDX-License-Identifier: Apache-2.0
//
// Shared value types, the error type, and the deterministic task runner.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace bcurrent {

using cplx = std::complex<double>;

/// A point of C^n for n <= 2. Unused trailing components stay zero.
using CPoint = std::array<cplx, 2>;

/// A real vector of R^{2n} laid out as (x1, y1, x2, y2).
using RVec = std::array<double, 4>;

inline constexpr int kMaxDim = 2;

inline RVec to_real(const CPoint& z) {
  return {z[0].real(), z[0].imag(), z[1].real(), z[1].imag()};
}

inline CPoint to_complex(const RVec& p) {
  return {cplx(p[0], p[1]), cplx(p[2], p[3])};
}

inline double dot(const RVec& a, const RVec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm(const RVec& a) { return std::sqrt(dot(a, a)); }

inline double distance(const CPoint& a, const CPoint& b) {
  return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

inline CPoint operator+(const CPoint& a, const CPoint& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline CPoint operator-(const CPoint& a, const CPoint& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline CPoint operator*(double s, const CPoint& a) { return {s * a[0], s * a[1]}; }

enum class ErrorCode {
  InvalidArgument,
  ConfigParse,
  GeometryInvalid,
  Unsupported,
  NoConvergence,
  OutsideDomain,
  NoOutwardVector,
  CoverIncomplete,
  PoleInside,
  PoleOnBoundary,
  BudgetExceeded,
  NotL1,
  FormNotClosed,
  TooFewSamples,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Runs task(i) for i in [0, count) on up to `threads` workers. Each task must
/// write only its own output slot; results are then independent of `threads`.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

/// printf-style "%.17g" rendering used by every CSV/JSON writer.
std::string format_double(double value);

}  // namespace bcurrent
