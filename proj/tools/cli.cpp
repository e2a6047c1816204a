#include "cli.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergmlab/clt.hpp"
#include "ergmlab/curie_weiss.hpp"
#include "ergmlab/decomp.hpp"
#include "ergmlab/errors.hpp"
#include "ergmlab/exact.hpp"
#include "ergmlab/identities.hpp"
#include "ergmlab/io.hpp"
#include "ergmlab/sampler.hpp"
#include "ergmlab/stats.hpp"
#include "ergmlab/stein.hpp"
#include "json.hpp"

namespace ergmlab::cli {

namespace {

using nlohmann::json;

struct Common {
  bool no_timestamp = false;
};

struct Args {
  std::string spec_path;
  std::optional<int> n;
  std::vector<int> ns;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 10000;
  std::uint64_t burn = 0;
  std::uint64_t thin = 1;
  std::size_t count = 1000;
  double tol = 1e-12;
  std::size_t outer = 20000;
  std::size_t inner = 32;
  std::size_t chains = 1;
  std::size_t threads = 1;
  std::string report;
  std::string out_csv;
  std::string hist_csv;
  std::string hex_path;
  std::string template_name;
  std::string source;
  std::string multiplicity = "amended";
  int centering_n = 4;
  bool homs = false;
  bool cftp = false;
  bool no_closed_forms = false;
  bool delta1 = false;
  std::size_t delta1_outer = 2000;
  bool rate = false;
  bool lln = false;
  bool stein = false;
  int cw_N = 0;
  double cw_beta = 0;
  std::size_t trials = 1000;
  int max_template_vertices = 5;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json header(const std::string& command, const Common& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  if (!c.no_timestamp) j["generated_at"] = timestamp();
  return j;
}

// Explicit seed, or a fresh one that the report records.
std::uint64_t resolve_seed(const Args& a, json& rep) {
  if (a.seed) {
    rep["seed"] = *a.seed;
    rep["seed_generated"] = false;
    return *a.seed;
  }
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  rep["seed"] = s;
  rep["seed_generated"] = true;
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
  if (!f) throw ConfigError("failed writing " + path);
}

void emit(const json& rep, const Args& a, std::ostream& out) {
  const std::string text = rep.dump(2) + "\n";
  out << text;
  if (!a.report.empty()) write_text(a.report, text);
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

io::SpecFile load_spec(const Args& a) {
  if (a.spec_path.empty()) throw ConfigError("--spec is required");
  return io::load_spec_file(a.spec_path);
}

int require_n(const Args& a, const io::SpecFile& sf) {
  if (a.n) return *a.n;
  if (sf.n) return *sf.n;
  throw ConfigError("vertex count missing: pass --n or set \"n\" in the spec");
}

json spec_json(const ErgmSpec& spec) { return json::parse(io::format_spec_json(spec, std::nullopt)); }

json template_json(const Template& t) {
  json edges = json::array();
  for (const auto& [i, j] : t.edges()) edges.push_back({i + 1, j + 1});
  return {{"v", t.vertices()}, {"edges", edges}};
}

json region_json(const ErgmSpec& spec, const RegionReport& r, std::optional<int> n) {
  json j;
  j["classification"] = to_string(r.classification);
  j["subcritical"] = r.subcritical();
  j["dobrushin"] = r.dobrushin();
  j["dobrushin_value"] = r.dobrushin_value;
  j["tol"] = r.tol;
  j["p"] = r.p ? json(*r.p) : json(nullptr);
  json roots = json::array();
  for (const auto& fp : r.roots) {
    roots.push_back({{"a", fp.a}, {"phi_prime", fp.phi_prime}, {"identity_residual", fp.identity_residual}});
  }
  j["roots"] = roots;
  j["notes"] = r.notes;
  if (n && r.subcritical()) {
    j["n"] = *n;
    j["sigma_n_sq"] = sigma_n_sq(spec, r, *n);
  }
  return j;
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

int cmd_solve(const Args& a, const Common& c, std::ostream& out, bool compact) {
  const auto sf = load_spec(a);
  const auto region = solve_fixed_point(sf.spec, a.tol);
  json rep = header(compact ? "classify" : "solve", c);
  rep["spec"] = spec_json(sf.spec);
  const std::optional<int> n = a.n ? a.n : sf.n;
  if (compact) {
    rep["classification"] = to_string(region.classification);
    rep["subcritical"] = region.subcritical();
    rep["dobrushin"] = region.dobrushin();
    rep["dobrushin_value"] = region.dobrushin_value;
    rep["p"] = region.p ? json(*region.p) : json(nullptr);
    rep["root_count"] = region.roots.size();
  } else {
    rep["region"] = region_json(sf.spec, region, n);
  }
  emit(rep, a, out);
  return kExitOk;
}

int cmd_sample(const Args& a, const Common& c, std::ostream& out) {
  const auto sf = load_spec(a);
  const int n = require_n(a, sf);
  json rep = header("sample", c);
  const std::uint64_t seed = resolve_seed(a, rep);
  rep["spec"] = spec_json(sf.spec);
  rep["n"] = n;
  std::vector<EdgeGraph> graphs;
  if (a.cftp) {
    std::uint64_t longest = 0;
    for (std::size_t k = 0; k < a.count; ++k) {
      auto r = cftp_sample(sf.spec, n, derive_seed(seed, k));
      longest = std::max(longest, r.horizon_sweeps);
      graphs.push_back(std::move(r.graph));
    }
    rep["method"] = "cftp";
    rep["count"] = a.count;
    rep["longest_horizon_sweeps"] = longest;
  } else {
    SampleOptions so;
    so.burn_in_sweeps = a.burn;
    so.thin_sweeps = a.thin;
    so.count = a.count;
    so.seed = seed;
    auto run = sample(sf.spec, n, so);
    graphs = std::move(run.graphs);
    rep["method"] = "glauber";
    rep["burn_in_sweeps"] = run.meta.burn_in_sweeps;
    rep["thin_sweeps"] = run.meta.thin_sweeps;
    rep["count"] = run.meta.count;
    rep["total_steps"] = run.meta.total_steps;
  }
  std::vector<double> edges;
  for (const auto& g : graphs) edges.push_back(static_cast<double>(g.edge_count()));
  rep["edge_count_mean"] = stats::mean(edges);
  rep["edge_count_variance"] = edges.size() > 1 ? stats::variance(edges) : 0.0;
  rep["edge_count_ess"] = edges.size() > 2 ? stats::effective_sample_size(edges) : 0.0;
  const auto region = solve_fixed_point(sf.spec);
  rep["classification"] = to_string(region.classification);
  if (!region.subcritical()) {
    rep["warnings"] = {"spec is not subcritical; no mixing guarantee for the chain"};
  }

  if (!a.out_csv.empty()) {
    std::ostringstream os;
    os << "sample_id,edge_count";
    if (a.homs) {
      for (std::size_t j = 1; j < sf.spec.size(); ++j) os << ",hom_" << j;
    }
    os << "\n";
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      os << k << "," << graphs[k].edge_count();
      if (a.homs) {
        for (std::size_t j = 1; j < sf.spec.size(); ++j) os << "," << sf.spec.counter(j).count(graphs[k]);
      }
      os << "\n";
    }
    write_text(a.out_csv, os.str());
    rep["csv"] = a.out_csv;
  }
  if (!a.hex_path.empty()) {
    std::string text;
    for (const auto& g : graphs) text += io::format_graph(g);
    write_text(a.hex_path, text);
    rep["hex"] = a.hex_path;
  }
  emit(rep, a, out);
  return kExitOk;
}

int cmd_exact(const Args& a, const Common& c, std::ostream& out) {
  const auto sf = load_spec(a);
  const int n = require_n(a, sf);
  const ExactMeasure m(sf.spec, n);
  json rep = header("exact", c);
  rep["spec"] = spec_json(sf.spec);
  rep["n"] = n;
  rep["states"] = m.states();
  rep["log_Z"] = m.log_z();
  rep["Z"] = std::exp(m.log_z());
  rep["mu"] = m.edge_moments().mean;
  rep["edge_count_variance"] = m.edge_moments().variance();
  rep["edge_marginal"] = m.edge_moments().mean / static_cast<double>(m.pair_slots());
  rep["edge_count_law"] = m.edge_count_law();
  json homs = json::array();
  for (std::size_t j = 0; j < sf.spec.size(); ++j) {
    homs.push_back({{"template", template_json(sf.spec.templates()[j])},
                    {"mean", m.hom_moments(j).mean},
                    {"variance", m.hom_moments(j).variance()}});
  }
  rep["hom_moments"] = homs;
  const auto region = solve_fixed_point(sf.spec);
  rep["classification"] = to_string(region.classification);
  if (region.subcritical()) {
    const double s2 = sigma_n_sq(sf.spec, region, n);
    const auto w = exact_w_law(m, s2);
    rep["p"] = *region.p;
    rep["sigma_sq"] = s2;
    rep["dK"] = w.kolmogorov;
    rep["dW"] = w.wasserstein;
  } else {
    rep["p"] = nullptr;
    rep["sigma_sq"] = nullptr;
    rep["dK"] = nullptr;
    rep["dW"] = nullptr;
    rep["notes"] = {"sigma_n is defined only for subcritical specs; distances omitted"};
  }
  emit(rep, a, out);
  return kExitOk;
}

TiltedSource pick_source(const Args& a, const ErgmSpec& spec, int n) {
  if (a.source.empty()) {
    if (n <= ExactMeasure::kMaxVertices) return TiltedSource::Exact;
    return spec.monotone() ? TiltedSource::Cftp : TiltedSource::Glauber;
  }
  if (a.source == "exact") return TiltedSource::Exact;
  if (a.source == "cftp") return TiltedSource::Cftp;
  if (a.source == "glauber") return TiltedSource::Glauber;
  throw ConfigError("unknown --source " + a.source + " (exact, cftp, glauber)");
}

std::string to_string(TiltedSource s) {
  switch (s) {
    case TiltedSource::Exact: return "exact";
    case TiltedSource::Cftp: return "cftp";
    case TiltedSource::Glauber: return "glauber";
  }
  return "unknown";
}

json stein_json(const SteinEstimates& s) {
  return {{"b", estimate_json(s.b)},
          {"delta2", estimate_json(s.delta2)},
          {"delta3", estimate_json(s.delta3)},
          {"outer", s.outer},
          {"inner", s.inner},
          {"closed_forms", s.closed_forms},
          {"warnings", s.warnings}};
}

json delta1_json(const Delta1Diagnostics& d) {
  return {{"cubic_f", estimate_json(d.cubic_f)},
          {"tilt_remainder", estimate_json(d.tilt_remainder)},
          {"dstar_cross", estimate_json(d.dstar_cross)},
          {"dstar_mean", estimate_json(d.dstar_mean)},
          {"delta1", estimate_json(d.delta1)},
          {"delta1_prime", estimate_json(d.delta1_prime)},
          {"ess", d.ess},
          {"draws", d.draws},
          {"warnings", d.warnings}};
}

int cmd_stein(const Args& a, const Common& c, std::ostream& out) {
  const auto sf = load_spec(a);
  const int n = require_n(a, sf);
  json rep = header("stein", c);
  const std::uint64_t seed = resolve_seed(a, rep);
  const TiltedSource src = pick_source(a, sf.spec, n);
  SampleOptions chain;
  chain.burn_in_sweeps = a.burn;
  chain.thin_sweeps = a.thin;
  chain.seed = derive_seed(seed, 0x5a);
  const ErgmFamily fam(sf.spec, n, src, std::nullopt, chain);
  SteinOptions o;
  o.outer = a.outer;
  o.inner = a.inner;
  o.seed = seed;
  o.use_closed_forms = !a.no_closed_forms;
  rep["spec"] = spec_json(sf.spec);
  rep["n"] = n;
  rep["source"] = to_string(src);
  rep["p"] = fam.p();
  rep["sigma"] = fam.sigma();
  rep["mu"] = fam.mu();
  rep["asymptotic_b"] = fam.asymptotic_b();
  rep["estimates"] = stein_json(estimate_stein(fam, o));
  if (a.delta1) rep["delta1"] = delta1_json(diagnostic_delta1(fam, a.delta1_outer, a.inner, derive_seed(seed, 0xd1)));
  emit(rep, a, out);
  return kExitOk;
}

int cmd_cw(const Args& a, const Common& c, std::ostream& out) {
  if (a.cw_N < 1) throw ConfigError("--N is required and must be positive");
  const auto m = build_cw(a.cw_N, a.cw_beta);
  const auto d = exact_distances(m);
  json rep = header("cw", c);
  rep["N"] = a.cw_N;
  rep["beta"] = a.cw_beta;
  rep["sigma_sq"] = m.sigma_sq;
  rep["var_s"] = m.var_s();
  rep["variance_ratio"] = variance_ratio(m);
  rep["dK"] = d.kolmogorov;
  rep["dW"] = d.wasserstein;
  rep["dK_sqrt_N"] = d.kolmogorov * std::sqrt(a.cw_N);
  rep["b_exact"] = 1 - a.cw_beta;
  rep["delta3_exact"] = cw_exact_delta3(m);
  if (a.stein) {
    const std::uint64_t seed = resolve_seed(a, rep);
    SteinOptions o;
    o.outer = a.outer;
    o.inner = a.inner;
    o.seed = seed;
    o.use_closed_forms = !a.no_closed_forms;
    rep["estimates"] = stein_json(estimate_stein(CwFamily(a.cw_N, a.cw_beta), o));
  }
  emit(rep, a, out);
  return kExitOk;
}

json slope_json(const decomp::Slope& s) {
  return {{"value", s.value}, {"se", s.se}, {"lo", s.lo}, {"hi", s.hi}};
}

// Largest |E g_I| over all index sets of each order on the enumerable host.
json centering_json(const ErgmSpec& spec, int n, decomp::Multiplicity form) {
  const ExactMeasure m(spec, n);
  const std::size_t N = m.pair_slots();
  std::vector<decomp::EdgeSet> sets;
  for (unsigned mask = 1; mask < (1U << N); ++mask) {
    if (std::popcount(mask) <= static_cast<int>(decomp::kMaxOrder)) {
      decomp::EdgeSet s;
      for (std::size_t k = 0; k < N; ++k) {
        if ((mask >> k) & 1U) s.push_back(k);
      }
      sets.push_back(std::move(s));
    }
  }
  const auto ctx = decomp::exact_moments(m, sets);
  std::vector<double> worst(decomp::kMaxOrder + 1, 0.0);
  for (const auto& I : sets) {
    const double e = m.expectation([&](const EdgeGraph& g) { return decomp::g_I({I}, ctx, g, form); });
    worst[I.size()] = std::max(worst[I.size()], std::abs(e));
  }
  json by_order = json::object();
  for (std::size_t d = 1; d <= decomp::kMaxOrder; ++d) by_order[std::to_string(d)] = worst[d];
  // Substitution check of the product expansion on every graph.
  double expand_residual = 0;
  for (const auto& I : sets) {
    const auto ex = decomp::expand_product(I, ctx.p_tilde());
    for (std::size_t code = 0; code < m.states(); ++code) {
      std::vector<double> y;
      double prod = 1;
      for (std::size_t l : I) {
        y.push_back(static_cast<double>((code >> l) & 1U));
        prod *= y.back();
      }
      expand_residual = std::max(expand_residual, std::abs(ex.polynomial(y) - prod));
    }
  }
  return {{"n", n},
          {"moment_source", ctx.source()},
          {"p_tilde", ctx.p_tilde()},
          {"index_sets", sets.size()},
          {"max_abs_mean_by_order", by_order},
          {"expand_product_max_residual", expand_residual}};
}

int cmd_decomp(const Args& a, const Common& c, std::ostream& out) {
  const auto sf = load_spec(a);
  if (a.template_name.empty()) throw ConfigError("--template is required");
  if (a.ns.empty()) throw ConfigError("--ns is required");
  decomp::Multiplicity form;
  if (a.multiplicity == "amended") {
    form = decomp::Multiplicity::Amended;
  } else if (a.multiplicity == "original") {
    form = decomp::Multiplicity::Original;
  } else {
    throw ConfigError("unknown --multiplicity " + a.multiplicity + " (amended, original)");
  }
  const Template h = io::resolve_template(a.template_name);
  json rep = header("decomp", c);
  const std::uint64_t seed = resolve_seed(a, rep);
  decomp::ScanOptions o;
  o.samples = a.samples;
  o.seed = seed;
  o.thin_sweeps = a.thin;
  o.burn_in_sweeps = a.burn;
  const auto scan = decomp::residual_variance_scan(sf.spec, h, a.ns, o);
  rep["spec"] = spec_json(sf.spec);
  rep["template"] = template_json(h);
  rep["p"] = scan.p;
  rep["dobrushin"] = scan.dobrushin;
  rep["samples"] = a.samples;
  json rows = json::array();
  for (const auto& r : scan.rows) {
    rows.push_back({{"n", r.n},
                    {"mu_hat", r.mu_hat},
                    {"sigma_sq", r.sigma_sq},
                    {"coefficient", r.coefficient},
                    {"raw_var", r.raw_var},
                    {"raw_var_se", r.raw_var_se},
                    {"residual_var", r.residual_var},
                    {"residual_var_se", r.residual_var_se},
                    {"ratio", r.ratio},
                    {"residual_third_abs_moment", r.residual_third_abs}});
  }
  rep["rows"] = rows;
  rep["raw_slope"] = slope_json(scan.raw_slope);
  rep["residual_slope"] = slope_json(scan.residual_slope);
  rep["slope_gap"] = std::isnan(scan.slope_gap) ? json(nullptr) : json(scan.slope_gap);
  rep["notes"] = scan.notes;
  rep["multiplicity"] = a.multiplicity;
  if (a.centering_n > 0) rep["centering"] = centering_json(sf.spec, a.centering_n, form);
  emit(rep, a, out);
  return kExitOk;
}

json distance_json(const clt::DistanceReport& r) {
  json j = {{"n", r.n},
            {"samples", r.samples},
            {"source", clt::to_string(r.source)},
            {"p", r.p},
            {"mu_hat", r.mu_hat},
            {"mu_se", r.mu_se},
            {"var_hat", r.var_hat},
            {"sigma_sq", r.sigma_sq},
            {"var_ratio", r.var_hat / r.sigma_sq},
            {"dK", r.dK},
            {"dK_band", r.dK_band},
            {"dW", r.dW},
            {"dW_se", r.dW_se},
            {"lln_scaled", r.lln_scaled},
            {"ess", r.ess},
            {"warnings", r.warnings}};
  j["reference_dK"] = r.reference_dK ? json(*r.reference_dK) : json(nullptr);
  if (r.corr_with_edge) j["corr_with_edge"] = *r.corr_with_edge;
  return j;
}

json rate_json(const clt::RateReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"dK", row.dK}, {"noise_floor", row.noise_floor}});
  return {{"rows", rows}, {"slope", r.slope}, {"slope_se", r.slope_se}, {"lo", r.lo}, {"hi", r.hi},
          {"exact", r.exact}, {"method", r.method}, {"notes", r.notes}};
}

int cmd_clt(const Args& a, const Common& c, std::ostream& out) {
  const auto sf = load_spec(a);
  std::vector<int> ns = a.ns;
  if (ns.empty()) ns.push_back(require_n(a, sf));
  json rep = header("clt", c);
  const std::uint64_t seed = resolve_seed(a, rep);
  std::optional<Template> h;
  if (!a.template_name.empty()) h = io::resolve_template(a.template_name);
  clt::CltOptions o;
  o.samples = a.samples;
  o.burn_in_sweeps = a.burn;
  o.thin_sweeps = a.thin;
  o.chains = a.chains;
  o.threads = a.threads;
  o.keep_values = !a.hist_csv.empty();
  std::vector<clt::DistanceReport> reports;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    o.seed = derive_seed(seed, k);
    reports.push_back(h ? clt::subgraph_clt_experiment(sf.spec, *h, ns[k], o)
                        : clt::edge_clt_experiment(sf.spec, ns[k], o));
  }
  rep["spec"] = spec_json(sf.spec);
  if (h) rep["template"] = template_json(*h);
  json rows = json::array();
  for (const auto& r : reports) rows.push_back(distance_json(r));
  rep["rows"] = rows;
  std::vector<std::string> notes;
  for (std::size_t k = 1; k < reports.size(); ++k) {
    if (reports[k].dK > reports[k - 1].dK) {
      notes.push_back("d_K does not decrease from n=" + std::to_string(reports[k - 1].n) + " to n=" +
                      std::to_string(reports[k].n) + " (finite-n monotonicity is not guaranteed)");
    }
  }
  rep["notes"] = notes;
  if (a.rate) {
    o.seed = derive_seed(seed, 0x7a7e);
    o.keep_values = false;
    rep["rate_scan"] = rate_json(clt::rate_scan(sf.spec, ns, o));
  }
  if (a.lln) {
    o.seed = derive_seed(seed, 0x11);
    const auto l = clt::lln_check(sf.spec, ns, o);
    json lrows = json::array();
    for (const auto& r : l.rows) {
      lrows.push_back({{"n", r.n}, {"density", r.density}, {"density_se", r.density_se},
                       {"scaled", r.scaled}, {"scaled_se", r.scaled_se}});
    }
    rep["lln"] = {{"p", l.p}, {"rows", lrows}, {"spread", l.spread}, {"bounded", l.bounded}, {"notes", l.notes}};
  }
  if (!a.out_csv.empty()) {
    std::ostringstream os;
    os << "n,mu_hat,var_hat,sigma_sq,dK,dK_band,dW,lln_scaled\n";
    for (const auto& r : reports) {
      os << r.n << "," << num(r.mu_hat) << "," << num(r.var_hat) << "," << num(r.sigma_sq) << ","
         << num(r.dK) << "," << num(r.dK_band) << "," << num(r.dW) << "," << num(r.lln_scaled) << "\n";
    }
    write_text(a.out_csv, os.str());
    rep["csv"] = a.out_csv;
  }
  if (!a.hist_csv.empty()) {
    std::ostringstream os;
    os << "n,sample_id,w\n";
    for (const auto& r : reports) {
      for (std::size_t k = 0; k < r.values.size(); ++k) os << r.n << "," << k << "," << num(r.values[k]) << "\n";
    }
    write_text(a.hist_csv, os.str());
    rep["hist_csv"] = a.hist_csv;
  }
  emit(rep, a, out);
  return kExitOk;
}

int cmd_identities(const Args& a, const Common& c, std::ostream& out, std::ostream& err) {
  IdentityOptions o;
  o.n = a.n.value_or(12);
  o.trials = a.trials;
  o.max_template_vertices = a.max_template_vertices;
  json rep = header("identities", c);
  o.seed = resolve_seed(a, rep);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_identity_suite(o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep["n"] = o.n;
  rep["trials"] = r.trials;
  rep["checks"] = {{"toggle", r.toggle_checks},
                   {"edge_weighted", r.weighted_checks},
                   {"deletion_sum", r.deletion_checks},
                   {"isolated_vertex", r.isolated_checks},
                   {"complete_host", r.complete_checks}};
  rep["violation_count"] = r.violation_count;
  rep["violations"] = r.violations;
  rep["ok"] = r.ok();
  if (!c.no_timestamp) rep["seconds"] = secs;
  emit(rep, a, out);
  if (!r.ok()) {
    err << "identity violations: " << r.violation_count << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments for normal approximation of exponential random graph models"};
  app.name("ergmlab");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Args a;
  app.add_flag("--no-timestamp", common.no_timestamp, "Omit wall-clock fields from reports");

  auto add_spec = [&](CLI::App* s) { s->add_option("--spec", a.spec_path, "Model spec JSON file")->required(); };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", a.seed, "Random seed (generated and recorded if absent)"); };
  auto add_report = [&](CLI::App* s) { s->add_option("--report", a.report, "Also write the JSON report here"); };
  auto add_chain = [&](CLI::App* s) {
    s->add_option("--burn", a.burn, "Burn-in sweeps (0 = default)");
    s->add_option("--thin", a.thin, "Sweeps between retained states")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Fixed-point roots and region report");
  add_spec(solve);
  solve->add_option("--tol", a.tol, "Root tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--n", a.n, "Vertex count for sigma_n^2");
  add_report(solve);

  auto* classify = app.add_subcommand("classify", "Region classification only");
  add_spec(classify);
  classify->add_option("--tol", a.tol, "Root tolerance")->check(CLI::PositiveNumber);
  add_report(classify);

  auto* samp = app.add_subcommand("sample", "Glauber or CFTP samples");
  add_spec(samp);
  samp->add_option("--n", a.n, "Vertex count")->check(CLI::Range(2, kMaxHostVertices));
  samp->add_option("--count", a.count, "Number of samples")->check(CLI::PositiveNumber);
  add_chain(samp);
  add_seed(samp);
  samp->add_option("--out", a.out_csv, "CSV of per-sample statistics");
  samp->add_flag("--homs", a.homs, "Add per-template hom counts to the CSV");
  samp->add_option("--hex", a.hex_path, "Dump every sampled graph in hex form");
  samp->add_flag("--cftp", a.cftp, "Exact draws by coupling from the past");
  add_report(samp);

  auto* exact = app.add_subcommand("exact", "Enumerate all graphs on n <= 6 vertices");
  add_spec(exact);
  exact->add_option("--n", a.n, "Vertex count");
  add_report(exact);

  auto* stein = app.add_subcommand("stein", "Monte-Carlo Stein quantities b, delta2, delta3");
  add_spec(stein);
  stein->add_option("--n", a.n, "Vertex count")->check(CLI::Range(2, kMaxHostVertices));
  stein->add_option("--outer", a.outer, "Draws of Y")->check(CLI::PositiveNumber);
  stein->add_option("--inner", a.inner, "Draws of X' per Y")->check(CLI::PositiveNumber);
  stein->add_option("--source", a.source, "exact, cftp or glauber");
  stein->add_flag("--no-closed-forms", a.no_closed_forms, "Force nested Monte Carlo");
  stein->add_flag("--delta1", a.delta1, "Add delta1 diagnostics");
  stein->add_option("--delta1-outer", a.delta1_outer, "Baseline draws for delta1")->check(CLI::PositiveNumber);
  add_chain(stein);
  add_seed(stein);
  add_report(stein);

  auto* cw = app.add_subcommand("cw", "Exact Curie-Weiss distances");
  cw->add_option("--N", a.cw_N, "Number of spins")->required()->check(CLI::PositiveNumber);
  cw->add_option("--beta", a.cw_beta, "Inverse temperature in (0,1)")->required();
  cw->add_flag("--stein", a.stein, "Add Stein estimates");
  cw->add_option("--outer", a.outer, "Draws for the Stein estimates")->check(CLI::PositiveNumber);
  cw->add_option("--inner", a.inner, "Inner draws")->check(CLI::PositiveNumber);
  cw->add_flag("--no-closed-forms", a.no_closed_forms, "Force nested Monte Carlo");
  add_seed(cw);
  add_report(cw);

  auto* dec = app.add_subcommand("decomp", "Residual-variance scan and Hoeffding centering");
  add_spec(dec);
  dec->add_option("--template", a.template_name, "Template name or file")->required();
  dec->add_option("--ns", a.ns, "Comma-separated vertex counts")->delimiter(',')->required();
  dec->add_option("--samples", a.samples, "Samples per n")->check(CLI::PositiveNumber);
  dec->add_option("--multiplicity", a.multiplicity, "amended or original");
  dec->add_option("--centering-n", a.centering_n, "Host size for the exact centering check (0 = skip)")
      ->check(CLI::Range(0, ExactMeasure::kMaxVertices));
  add_chain(dec);
  add_seed(dec);
  add_report(dec);

  auto* cl = app.add_subcommand("clt", "Distances of W (or W_H) to the standard normal");
  add_spec(cl);
  cl->add_option("--ns", a.ns, "Comma-separated vertex counts")->delimiter(',');
  cl->add_option("--n", a.n, "Single vertex count");
  cl->add_option("--samples", a.samples, "Samples per n")->check(CLI::PositiveNumber);
  cl->add_option("--template", a.template_name, "Use W_H for this template");
  cl->add_option("--out", a.out_csv, "CSV summary");
  cl->add_option("--emit-hist", a.hist_csv, "CSV of standardized values");
  cl->add_option("--chains", a.chains, "Independent chains")->check(CLI::PositiveNumber);
  cl->add_option("--threads", a.threads, "Worker threads")->check(CLI::PositiveNumber);
  cl->add_flag("--rate", a.rate, "Add a log-log rate fit (needs four sizes)");
  cl->add_flag("--lln", a.lln, "Add the density residual table");
  add_chain(cl);
  add_seed(cl);
  add_report(cl);

  auto* ids = app.add_subcommand("identities", "Exact counting identities on random graphs");
  ids->add_option("--n", a.n, "Host vertex count")->check(CLI::Range(2, kMaxHostVertices));
  ids->add_option("--trials", a.trials, "Random graphs")->check(CLI::PositiveNumber);
  ids->add_option("--max-template-vertices", a.max_template_vertices, "Template size cap")
      ->check(CLI::Range(2, kMaxTemplateVertices));
  add_seed(ids);
  add_report(ids);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ergmlab: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(a, common, out, false);
    if (classify->parsed()) return cmd_solve(a, common, out, true);
    if (samp->parsed()) return cmd_sample(a, common, out);
    if (exact->parsed()) return cmd_exact(a, common, out);
    if (stein->parsed()) return cmd_stein(a, common, out);
    if (cw->parsed()) return cmd_cw(a, common, out);
    if (dec->parsed()) return cmd_decomp(a, common, out);
    if (cl->parsed()) return cmd_clt(a, common, out);
    if (ids->parsed()) return cmd_identities(a, common, out, err);
  } catch (const ConfigError& e) {
    err << "ergmlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "ergmlab: precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "ergmlab: " << e.what() << "\n";
    return kExitFailure;
  }
  err << "ergmlab: no subcommand\n";
  return kExitConfig;
}

}  // namespace ergmlab::cli
