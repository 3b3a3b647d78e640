#include "blesskit/bless.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "blesskit/error.hpp"
#include "blesskit/rng.hpp"

namespace blesskit {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Index checked_level_size(double value, const BlessParams& params, int level, const char* what) {
  if (!std::isfinite(value) || value > static_cast<double>(params.max_level_size)) {
    throw ResourceLimit("level " + std::to_string(level) + ": " + what + " = " +
                        std::to_string(value) + " exceeds the level size cap " +
                        std::to_string(params.max_level_size));
  }
  return std::max<Index>(1, static_cast<Index>(std::ceil(value)));
}

Dictionary initial_dictionary(double lambda0) {
  Dictionary d;
  d.lambda = lambda0;
  d.weights.resize(0);
  d.level = 0;
  return d;
}

}  // namespace

Schedule make_schedule(double lambda0, double lambda_final, double q) {
  if (!(lambda_final > 0.0) || !std::isfinite(lambda0) || !(lambda0 >= lambda_final)) {
    throw InvalidArgument("schedule requires lambda0 >= lambda_final > 0");
  }
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("schedule requires q > 1");
  Schedule s;
  s.lambda0 = lambda0;
  s.lambda_final = lambda_final;
  s.q = q;
  // The slack keeps exact powers of q (log 16 / log 2 = 4.000...01) from
  // gaining a spurious extra level.
  const double ratio = std::log(lambda0 / lambda_final) / std::log(q);
  s.levels = std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
  s.lambdas.resize(static_cast<std::size_t>(s.levels));
  double lam = lambda0;
  for (int h = 0; h < s.levels; ++h) {
    lam /= q;
    s.lambdas[static_cast<std::size_t>(h)] = lam;
  }
  s.lambdas.back() = lambda_final;
  return s;
}

void BlessParams::validate() const {
  if (!(q > 1.0)) throw InvalidArgument("BLESS parameter q must be > 1");
  if (!(q1 > 0.0)) throw InvalidArgument("BLESS parameter q1 must be > 0");
  if (!(q2 > 0.0)) throw InvalidArgument("BLESS parameter q2 must be > 0");
  if (!(accuracy_t > 0.0)) throw InvalidArgument("BLESS accuracy t must be > 0");
  if (max_level_size < 1) throw InvalidArgument("max_level_size must be >= 1");
}

double BlessParams::lambda0(double kappa2) const { return kappa2 / std::min(accuracy_t, 1.0); }

DictionaryPath bless(const Dataset& data, const KernelSpec& spec, double lambda,
                     const BlessParams& params) {
  params.validate();
  if (!(lambda > 0.0)) throw InvalidArgument("bless: lambda must be > 0");
  const Index n = data.size();
  const double nd = static_cast<double>(n);
  const double kappa2 = spec.bound();
  DictionaryPath path;
  path.schedule = make_schedule(std::max(params.lambda0(kappa2), lambda), lambda, params.q);

  Dictionary previous = initial_dictionary(path.schedule.lambda0);
  for (int h = 1; h <= path.schedule.levels; ++h) {
    const auto start = Clock::now();
    const double lam_h = path.schedule.lambdas[static_cast<std::size_t>(h - 1)];
    CounterRng rng(params.seed, static_cast<std::uint64_t>(h));
    LevelDiagnostics diag;
    diag.level = h;
    diag.lambda = lam_h;

    const Index r_h =
        checked_level_size(params.q1 * std::min(kappa2 / lam_h, nd), params, h, "R_h");
    IndexList candidates(static_cast<std::size_t>(r_h));
    for (auto& u : candidates) u = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));

    const GeneratorHandle handle = prepare_generator(data, spec, previous, lam_h);
    diag.jitter = handle.jitter();
    const ScoreVector scores = oos_scores(handle, candidates, lam_h);
    diag.clamped_scores = scores.clamped;
    const double total = scores.values.sum();
    if (!std::isfinite(total)) {
      throw NumericError("bless level " + std::to_string(h) + ": non-finite candidate scores");
    }

    Eigen::VectorXd probs(r_h);
    if (total > 0.0) {
      probs = scores.values / total;
    } else {
      diag.degenerate = true;
      probs.setConstant(1.0 / static_cast<double>(r_h));
    }
    diag.candidates = r_h;
    diag.d_estimate = nd / static_cast<double>(r_h) * total;
    const Index m_h = checked_level_size(params.q2 * diag.d_estimate, params, h, "M_h");
    diag.selected = m_h;

    std::vector<double> cumulative(static_cast<std::size_t>(r_h));
    double acc = 0.0;
    for (Index k = 0; k < r_h; ++k) cumulative[static_cast<std::size_t>(k)] = (acc += probs(k));

    Dictionary next;
    next.lambda = lam_h;
    next.level = h;
    next.indices.resize(static_cast<std::size_t>(m_h));
    next.weights.resize(m_h);
    Eigen::VectorXd drawn_probs(m_h);
    const double scale = static_cast<double>(r_h) * static_cast<double>(m_h) / nd;
    for (Index j = 0; j < m_h; ++j) {
      const std::size_t k = draw_from_cumulative(rng, cumulative);
      next.indices[static_cast<std::size_t>(j)] = candidates[k];
      drawn_probs(j) = probs(static_cast<Index>(k));
      next.weights(j) = scale * drawn_probs(j);
    }
    next.probs = std::move(drawn_probs);

    diag.seconds = seconds_since(start);
    path.diagnostics.push_back(diag);
    path.levels.push_back(next);
    previous = std::move(next);
  }
  return path;
}

DictionaryPath bless_r(const Dataset& data, const KernelSpec& spec, double lambda,
                       const BlessParams& params) {
  params.validate();
  if (!(lambda > 0.0)) throw InvalidArgument("bless_r: lambda must be > 0");
  const Index n = data.size();
  const double nd = static_cast<double>(n);
  const double kappa2 = spec.bound();
  DictionaryPath path;
  path.schedule = make_schedule(std::max(params.lambda0(kappa2), lambda), lambda, params.q);

  Dictionary previous = initial_dictionary(path.schedule.lambda0);
  double lam_prev = path.schedule.lambda0;
  for (int h = 1; h <= path.schedule.levels; ++h) {
    const auto start = Clock::now();
    const double lam_h = path.schedule.lambdas[static_cast<std::size_t>(h - 1)];
    CounterRng rng(params.seed, static_cast<std::uint64_t>(h));
    LevelDiagnostics diag;
    diag.level = h;
    diag.lambda = lam_h;

    const double beta = std::min(params.q2 * kappa2 / (lam_h * nd), 1.0);
    diag.beta = beta;
    IndexList candidates;
    for (Index i = 0; i < n; ++i) {
      if (rng.bernoulli(beta)) candidates.push_back(i);
    }
    diag.candidates = static_cast<Index>(candidates.size());
    if (diag.candidates > params.max_level_size) {
      throw ResourceLimit("level " + std::to_string(h) + ": |U_h| = " +
                          std::to_string(diag.candidates) + " exceeds the level size cap");
    }

    // Scores use the previous level's lambda, as the sampler is written.
    const GeneratorHandle handle = prepare_generator(data, spec, previous, lam_prev);
    diag.jitter = handle.jitter();
    const ScoreVector scores = oos_scores(handle, candidates, lam_prev);
    diag.clamped_scores = scores.clamped;
    const double total = scores.values.sum();
    if (!std::isfinite(total)) {
      throw NumericError("bless_r level " + std::to_string(h) + ": non-finite candidate scores");
    }
    diag.degenerate = !candidates.empty() && total <= 0.0;
    diag.d_estimate = total / beta;

    Dictionary next;
    next.lambda = lam_h;
    next.level = h;
    std::vector<double> accepted_p;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const double p = std::min(params.q2 * scores.values(static_cast<Index>(k)), 1.0);
      if (p > beta) ++diag.rejection_violations;
      const double accept = std::min(p / beta, 1.0);
      // Draw unconditionally so the stream position does not depend on p.
      const bool take = rng.uniform() < accept;
      if (take && p > 0.0) {
        next.indices.push_back(candidates[k]);
        accepted_p.push_back(p);
      }
    }
    next.weights = Eigen::Map<const Eigen::VectorXd>(accepted_p.data(),
                                                     static_cast<Index>(accepted_p.size()));
    next.probs = next.weights;
    diag.selected = next.size();

    diag.seconds = seconds_since(start);
    path.diagnostics.push_back(diag);
    path.levels.push_back(next);
    previous = std::move(next);
    lam_prev = lam_h;
  }
  return path;
}

}  // namespace blesskit
