#include "ftlink/distill_bounds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ftlink/model.hpp"

namespace ftlink {

int unencoding_depth(const CodeSpec& code) { return 3 * code.n - 2 - code.k; }

namespace {

constexpr int kBinomialTable = 64;

double binomial_lgamma(int n, int i) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)));
}

const std::array<std::array<double, kBinomialTable>, kBinomialTable>& binomial_table() {
  static const auto table = [] {
    std::array<std::array<double, kBinomialTable>, kBinomialTable> t{};
    for (int n = 0; n < kBinomialTable; ++n) {
      for (int i = 0; i <= n; ++i) {
        t[n][i] = binomial_lgamma(n, i);
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

double binomial(int n, int i) {
  if (i < 0 || i > n) {
    return 0.0;
  }
  if (n < kBinomialTable) {
    return binomial_table()[n][i];
  }
  return binomial_lgamma(n, i);
}

double effective_error(double p_in, double p_logical, const CodeSpec& code) {
  if (p_in < 0.0 || p_in > 1.0 || p_logical < 0.0 || p_logical > 1.0) {
    throw std::invalid_argument("effective_error: probabilities must lie in [0, 1]");
  }
  if (p_in == 1.0 || p_logical == 1.0) {
    return 1.0;
  }
  // 1 - (1 - p_in)(1 - p_L)^D without cancellation for small inputs.
  const double log_survival = std::log1p(-p_in) + unencoding_depth(code) * std::log1p(-p_logical);
  return clamp_probability(-std::expm1(log_survival));
}

StageBoundResult stage_bounds_from_q(double q, const CodeSpec& code) {
  StageBoundResult result;
  result.q = q;
  if (q >= 1.0) {
    result.p_fail = 1.0;
    result.p_out = 1.0;
    result.degenerate = true;
    return result;
  }
  if (q <= 0.0) {
    return result;
  }
  const double log_keep = std::log1p(-q);
  const double log_q = std::log(q);
  result.p_fail = clamp_probability(-std::expm1(code.n * log_keep));

  // Upper tail P(|E| >= d) summed directly; equal to 1 - sum_{i<d} but free of
  // the cancellation that swamps the tiny tails the optimizer works with.
  double tail = 0.0;
  for (int i = code.n; i >= code.d; --i) {
    tail += binomial(code.n, i) * std::exp(i * log_q + (code.n - i) * log_keep);
  }
  result.p_out = clamp_probability(tail / std::exp(code.n * log_keep));
  return result;
}

StageBoundResult stage_bounds(double p_in, double p_logical, const CodeSpec& code) {
  return stage_bounds_from_q(effective_error(p_in, p_logical, code), code);
}

}  // namespace ftlink
