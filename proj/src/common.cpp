// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>
#include <vector>

namespace bcurrent {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ConfigParse: return "CONFIG_PARSE";
    case ErrorCode::GeometryInvalid: return "GEOMETRY_INVALID";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::OutsideDomain: return "OUTSIDE_DOMAIN";
    case ErrorCode::NoOutwardVector: return "NO_OUTWARD_VECTOR";
    case ErrorCode::CoverIncomplete: return "COVER_INCOMPLETE";
    case ErrorCode::PoleInside: return "POLE_INSIDE";
    case ErrorCode::PoleOnBoundary: return "POLE_ON_BOUNDARY";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::NotL1: return "NOT_L1";
    case ErrorCode::FormNotClosed: return "FORM_NOT_CLOSED";
    case ErrorCode::TooFewSamples: return "TOO_FEW_SAMPLES";
  }
  return "UNKNOWN";
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Lowest failing index wins so the reported error does not depend on scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace bcurrent
