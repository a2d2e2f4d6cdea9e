#pragma once

#include "ftlink/codes.hpp"

namespace ftlink {

/// Depth of the generic parallel unencoding circuit, 3n - 2 - k.
int unencoding_depth(const CodeSpec& code);

/// Per-qubit error after unencoding, folding `p_in` and `depth` layers of
/// logical gate error `p_logical` into one effective rate q.
double effective_error(double p_in, double p_logical, const CodeSpec& code);

struct StageBoundResult {
  double q = 0.0;
  double p_fail = 0.0;
  double p_out = 0.0;
  // q == 1: every attempt is discarded.
  bool degenerate = false;
};

/// Pessimistic discard probability and post-selected output error of one
/// distillation stage, both bounds taken with equality.
StageBoundResult stage_bounds(double p_in, double p_logical, const CodeSpec& code);

/// Same bounds for an already-known effective error q.
StageBoundResult stage_bounds_from_q(double q, const CodeSpec& code);

/// C(n, i) through log-gamma.
double binomial(int n, int i);

}  // namespace ftlink
