#include "dbp/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dbp/error.hpp"
#include "dbp/parallel.hpp"
#include "dbp/rng.hpp"

namespace dbp {
namespace {

double reflect(double x) {
  // Fold onto [0, 1]; a proposal can overshoot by more than one width.
  x = std::fmod(std::abs(x), 2.0);
  return x > 1.0 ? 2.0 - x : x;
}

double log_target(double p, double a, double b) {
  // Endpoints have measure zero; rejecting them avoids 0 * log 0.
  if (p <= 0.0 || p >= 1.0) return -std::numeric_limits<double>::infinity();
  return (a - 1.0) * std::log(p) + (b - 1.0) * std::log1p(-p);
}

EdgeChain run_chain(double a, double b, const MhConfig& cfg, std::uint64_t stream) {
  Rng rng(cfg.seed, stream);
  EdgeChain chain;
  chain.samples.reserve(cfg.iterations - cfg.burn_in);
  double current = a / (a + b);
  double current_lp = log_target(current, a, b);
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const double proposal = reflect(current + cfg.proposal_scale * rng.normal());
    const double proposal_lp = log_target(proposal, a, b);
    const double u = rng.uniform();
    const bool accept = proposal_lp - current_lp >= 0.0 || std::log(u) < proposal_lp - current_lp;
    if (accept) {
      current = proposal;
      current_lp = proposal_lp;
    }
    if (it >= cfg.burn_in) {
      chain.samples.push_back(current);
      if (accept) ++accepted;
    }
  }
  const auto kept = static_cast<double>(chain.samples.size());
  chain.acceptance_rate = static_cast<double>(accepted) / kept;
  chain.mean = std::accumulate(chain.samples.begin(), chain.samples.end(), 0.0) / kept;
  const double tail = 0.5 * (1.0 - cfg.credible_level);
  chain.ci_low = sample_quantile(chain.samples, tail);
  chain.ci_high = sample_quantile(chain.samples, 1.0 - tail);
  return chain;
}

}  // namespace

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MhResult mh_sample_posterior(const TransitionCounts& counts, const BetaPrior& prior, const MhConfig& cfg) {
  if (!(cfg.proposal_scale > 0.0) || !std::isfinite(cfg.proposal_scale))
    throw InvalidArgument("proposal scale must be positive");
  if (cfg.iterations <= cfg.burn_in) throw InvalidArgument("iterations must exceed burn-in");
  if (!(cfg.credible_level > 0.0 && cfg.credible_level < 1.0))
    throw InvalidArgument("credible level must lie in (0, 1)");
  const PosteriorSpec post = posterior(counts, prior);

  MhResult result{counts.m, std::vector<EdgeChain>(post.alpha.size())};
  parallel_for(result.edges.size(), [&](std::size_t i) {
    result.edges[i] = run_chain(post.alpha[i], post.beta[i], cfg, i);
    result.edges[i].no_data = post.no_data[i];
  }, cfg.threads);
  return result;
}

}  // namespace dbp
