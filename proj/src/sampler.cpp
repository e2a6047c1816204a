#include "ergmlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ergmlab {

double logistic(double u) {
  return u >= 0 ? 1 / (1 + std::exp(-u)) : std::exp(u) / (1 + std::exp(u));
}

StepDraw step_draw(const CounterRng& rng, int n, std::uint64_t t) {
  const auto slots = static_cast<std::uint64_t>(pair_count(n));
  const auto wide = static_cast<unsigned __int128>(rng.at(2 * t)) * slots;
  StepDraw d;
  d.edge = EdgeId::from_index(n, static_cast<std::size_t>(wide >> 64));
  d.u = CounterRng::to_unit(rng.at(2 * t + 1));
  return d;
}

bool apply_update(const ErgmSpec& spec, EdgeGraph& g, const StepDraw& d) {
  const bool on = d.u <= logistic(cond_log_odds(spec, g, d.edge));
  g.set(d.edge, on);
  return on;
}

void glauber_step(const ErgmSpec& spec, ChainState& state) {
  const CounterRng rng(state.seed, state.stream);
  apply_update(spec, state.graph, step_draw(rng, state.graph.n(), state.steps));
  ++state.steps;
}

std::uint64_t default_burn_in_sweeps(int n) {
  if (n < 2) return 100;
  const double steps = std::ceil(static_cast<double>(n) * n * std::log(static_cast<double>(n)));
  const auto per_sweep = static_cast<double>(pair_count(n));
  return std::max<std::uint64_t>(100, static_cast<std::uint64_t>(std::ceil(steps / per_sweep)));
}

SampleMeta run_chain(const ErgmSpec& spec, int n, const SampleOptions& opts,
                     const std::function<void(std::size_t, const EdgeGraph&)>& visit) {
  if (n < 2) throw PreconditionError("chains need at least two vertices");
  if (opts.thin_sweeps < 1) throw PreconditionError("thinning must be at least one sweep");
  SampleMeta meta;
  meta.n = n;
  meta.burn_in_sweeps = opts.burn_in_sweeps == 0 ? default_burn_in_sweeps(n) : opts.burn_in_sweeps;
  meta.thin_sweeps = opts.thin_sweeps;
  meta.count = opts.count;
  meta.seed = opts.seed;
  meta.stream = opts.stream;

  const std::uint64_t sweep = pair_count(n);
  const CounterRng rng(opts.seed, opts.stream);
  EdgeGraph g(n);
  std::uint64_t t = 0;
  auto advance = [&](std::uint64_t sweeps) {
    for (std::uint64_t stop = t + sweeps * sweep; t < stop; ++t) {
      apply_update(spec, g, step_draw(rng, n, t));
    }
  };
  advance(meta.burn_in_sweeps);
  for (std::size_t k = 0; k < opts.count; ++k) {
    advance(meta.thin_sweeps);
    visit(k, g);
  }
  meta.total_steps = t;
  return meta;
}

SampleRun sample(const ErgmSpec& spec, int n, const SampleOptions& opts) {
  SampleRun run;
  run.graphs.reserve(opts.count);
  run.meta = run_chain(spec, n, opts, [&](std::size_t, const EdgeGraph& g) {
    run.graphs.push_back(g);
  });
  return run;
}

std::vector<SampleRun> sample_chains(const ErgmSpec& spec, int n, const SampleOptions& opts,
                                     std::size_t chains, std::size_t threads) {
  std::vector<SampleRun> runs(chains);
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(chains, 1));
  auto work = [&](std::size_t w) {
    for (std::size_t c = w; c < chains; c += threads) {
      SampleOptions o = opts;
      o.stream = opts.stream + c;
      runs[c] = sample(spec, n, o);
    }
  };
  if (threads == 1) {
    work(0);
    return runs;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  for (auto& th : pool) th.join();
  return runs;
}

CftpResult cftp_sample(const ErgmSpec& spec, int n, std::uint64_t seed, const CftpOptions& opts) {
  if (!spec.monotone()) {
    throw UnsupportedRegime("coupling from the past needs every non-edge beta >= 0");
  }
  if (n < 2) throw PreconditionError("chains need at least two vertices");
  const std::uint64_t sweep = pair_count(n);
  const CounterRng rng(seed);
  CftpResult result;
  std::size_t gap = 0;
  std::uint64_t horizon = 1;
  for (;;) {
    EdgeGraph lower(n);
    EdgeGraph upper = EdgeGraph::complete(n);
    for (std::uint64_t t = horizon * sweep; t >= 1; --t) {
      const StepDraw d = step_draw(rng, n, t - 1);
      const bool lo = apply_update(spec, lower, d);
      const bool hi = apply_update(spec, upper, d);
      if (opts.check_monotone && lo && !hi) {
        throw std::logic_error("monotone coupling violated at edge " +
                               std::to_string(d.edge.index));
      }
    }
    result.coupled_steps += horizon * sweep;
    if (lower == upper) {
      result.graph = std::move(lower);
      result.horizon_sweeps = horizon;
      return result;
    }
    gap = upper.edge_count() - lower.edge_count();
    if (horizon >= opts.max_sweeps) break;
    horizon = std::min(horizon * 2, opts.max_sweeps);
  }
  throw CftpTimeout("coupling from the past did not coalesce within " +
                        std::to_string(horizon) + " sweeps (" + std::to_string(gap) +
                        " edges still disagree)",
                    horizon, gap);
}

EdgeGraph er_sample(int n, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw PreconditionError("edge probability must lie in [0,1]");
  CounterRng rng(seed);
  EdgeGraph g(n);
  for (std::size_t k = 0; k < g.pair_slots(); ++k) {
    if (rng.uniform() < p) g.set(EdgeId::from_index(n, k), true);
  }
  return g;
}

std::vector<double> glauber_kernel(const ErgmSpec& spec, int n) {
  const std::size_t slots = pair_count(n);
  if (slots > 10) throw PreconditionError("dense kernel limited to 10 vertex pairs");
  const std::size_t states = std::size_t{1} << slots;
  std::vector<double> k(states * states, 0.0);
  const double pick = 1.0 / static_cast<double>(slots);
  for (std::size_t x = 0; x < states; ++x) {
    const EdgeGraph g = EdgeGraph::from_code(n, x);
    for (std::size_t s = 0; s < slots; ++s) {
      const double q = logistic(cond_log_odds(spec, g, EdgeId::from_index(n, s)));
      k[x * states + (x | (std::size_t{1} << s))] += pick * q;
      k[x * states + (x & ~(std::size_t{1} << s))] += pick * (1 - q);
    }
  }
  return k;
}

}  // namespace ergmlab
