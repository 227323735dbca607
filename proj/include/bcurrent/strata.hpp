// SPDX-License-Identifier: Apache-2.0
//
// Corner strata B_S and their genericity verdicts.

#pragma once

#include <string>
#include <vector>

#include "bcurrent/geometry.hpp"

namespace bcurrent {

enum class Verdict { Generic, NonGenericComplexRank, NonGenericCardinality, NotTransversal, Empty };

const char* verdict_name(Verdict v);

struct RankData {
  int real_rank = 0;
  int complex_rank = 0;
};

struct CornerStratum {
  std::vector<int> subset;  // piece indices, ascending
  std::vector<CPoint> samples;
  Verdict verdict = Verdict::Empty;
  std::vector<RankData> rank_data;  // one per sample
};

struct StrataOptions {
  int grid_resolution = 12;
  int max_samples = 64;
  int newton_iterations = 50;
};

/// One record for every subset S with |S| >= 2 (EMPTY ones included), samples
/// on B_S intersected with the closure of Omega. Seeds are grid cells on which
/// every rho_j of S changes sign; Newton failures are appended to `log`.
std::vector<CornerStratum> locate_strata(const PiecewiseDomain& domain, const StrataOptions& options,
                                         std::vector<std::string>* log = nullptr);

/// Rank threshold is 1e-8 relative to the largest singular value.
CornerStratum classify_stratum(const PiecewiseDomain& domain, CornerStratum stratum);

/// locate + classify.
std::vector<CornerStratum> classify_domain(const PiecewiseDomain& domain, const StrataOptions& options,
                                           std::vector<std::string>* log = nullptr);

/// True iff every nonempty stratum is GENERIC.
bool has_generic_corners(const std::vector<CornerStratum>& strata);

}  // namespace bcurrent
