#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergmlab/errors.hpp"
#include "ergmlab/graph.hpp"
#include "ergmlab/model.hpp"
#include "ergmlab/random.hpp"

namespace ergmlab {

/// Psi(u) = e^u / (1 + e^u), evaluated without overflow.
double logistic(double u);

/// Randomness consumed by one Glauber step: the edge to refresh and the
/// uniform that decides its new value.
struct StepDraw {
  EdgeId edge;
  double u = 0;
};

/// Draw for step `t` of stream (seed, stream). Pure in its arguments, which is
/// what lets coupled and restarted chains replay identical randomness.
StepDraw step_draw(const CounterRng& rng, int n, std::uint64_t t);

struct ChainState {
  EdgeGraph graph;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Heat-bath update of one edge: Y_I <- 1{U <= Psi(cond_log_odds(I))}.
/// Returns the new indicator.
bool apply_update(const ErgmSpec& spec, EdgeGraph& g, const StepDraw& d);

/// One step of the chain from its own stream, advancing the step counter.
void glauber_step(const ErgmSpec& spec, ChainState& state);

struct SampleOptions {
  std::uint64_t burn_in_sweeps = 0;  // 0 selects default_burn_in_sweeps(n)
  std::uint64_t thin_sweeps = 1;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct SampleMeta {
  int n = 0;
  std::uint64_t burn_in_sweeps = 0;
  std::uint64_t thin_sweeps = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t total_steps = 0;
};

/// ceil(n^2 log n) single-edge steps rounded up to whole sweeps, and never
/// fewer than 100 sweeps.
std::uint64_t default_burn_in_sweeps(int n);

/// Runs one chain from the empty graph and hands each retained state to
/// `visit` (index, graph). One sweep is N = n(n-1)/2 steps.
SampleMeta run_chain(const ErgmSpec& spec, int n, const SampleOptions& opts,
                     const std::function<void(std::size_t, const EdgeGraph&)>& visit);

struct SampleRun {
  std::vector<EdgeGraph> graphs;
  SampleMeta meta;
};

SampleRun sample(const ErgmSpec& spec, int n, const SampleOptions& opts);

/// Independent chains on streams opts.stream + c, c = 0..chains-1, run on up
/// to `threads` worker threads. Output order does not depend on scheduling.
std::vector<SampleRun> sample_chains(const ErgmSpec& spec, int n, const SampleOptions& opts,
                                     std::size_t chains, std::size_t threads);

class UnsupportedRegime : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CftpTimeout : public std::runtime_error {
 public:
  CftpTimeout(const std::string& what, std::uint64_t horizon, std::size_t gap)
      : std::runtime_error(what), horizon_sweeps(horizon), disagreeing_edges(gap) {}
  std::uint64_t horizon_sweeps;
  std::size_t disagreeing_edges;
};

struct CftpOptions {
  std::uint64_t max_sweeps = std::uint64_t{1} << 20;
  /// Checks lower <= upper on the refreshed edge after every coupled step.
  bool check_monotone = true;
};

struct CftpResult {
  EdgeGraph graph;
  std::uint64_t horizon_sweeps = 0;
  std::uint64_t coupled_steps = 0;
};

/// Exact draw by monotone coupling from the past. The step at time -t uses
/// step_draw(seed stream, n, t - 1), so extending the horizon reuses the
/// randomness of the shorter runs. Horizons double from one sweep.
CftpResult cftp_sample(const ErgmSpec& spec, int n, std::uint64_t seed,
                       const CftpOptions& opts = {});

/// Independent Bernoulli(p) edges.
EdgeGraph er_sample(int n, double p, std::uint64_t seed);

/// Dense single-step Glauber transition matrix over all 2^N graphs, row-major
/// with rows indexed by the source graph code. Requires N <= 10.
std::vector<double> glauber_kernel(const ErgmSpec& spec, int n);

}  // namespace ergmlab
