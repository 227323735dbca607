// SPDX-License-Identifier: Apache-2.0
//
// Small builders shared by the unit tests.

#pragma once

#include <functional>
#include <optional>

#include "bcurrent/scenario.hpp"

namespace testing_support {

using namespace bcurrent;

inline PieceSpec side(int axis, bool upper, double value) {
  PieceSpec s;
  s.kind = PieceKind::BoxSide;
  s.axis = axis;
  s.upper = upper;
  s.value = value;
  return s;
}

inline PieceSpec round_piece(int coord, cplx center, double radius, PieceKind kind = PieceKind::PolydiscFactor) {
  PieceSpec s;
  s.kind = kind;
  s.coord = coord;
  s.center = center;
  s.radius = radius;
  return s;
}

/// [0,2]^2 in C.
inline PiecewiseDomain unit_square2() {
  return PiecewiseDomain(1, {side(0, false, 0.0), side(0, true, 2.0), side(1, false, 0.0), side(1, true, 2.0)});
}

inline Cutoff disc_cutoff(cplx center, double inner, double outer, int coord = 0) {
  Cutoff c;
  c.factors.push_back({coord, center, inner, outer});
  return c;
}

/// Error code thrown by body, if any.
inline std::optional<ErrorCode> code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing_support
