#include "dagfuse/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dagfuse/parallel.hpp"

namespace dagfuse {

namespace {

void check_law_dims(const Signal<double>& v, const Dag& dag, const char* what) {
  detail::check_dims(v.size(), dag, what);
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const double denom = x.rows() > 1 ? static_cast<double>(x.rows() - 1) : 1.0;
  return centered.transpose() * centered / denom;
}

// Keeps the rows flagged ok, in replicate order.
EmpiricalLaw collect(const Eigen::MatrixXd& rows, const std::vector<char>& ok, std::uint64_t seed,
                     LawMeta meta) {
  for (std::size_t r = 0; r < ok.size(); ++r) {
    if (ok[r])
      meta.replicate_ids.push_back(r);
    else
      meta.failed_replicates.push_back(r);
  }
  meta.failures = meta.failed_replicates.size();
  EmpiricalLaw law;
  law.seed = seed;
  law.samples.resize(static_cast<Index>(meta.replicate_ids.size()), rows.cols());
  for (std::size_t i = 0; i < meta.replicate_ids.size(); ++i)
    law.samples.row(static_cast<Index>(i)) = rows.row(static_cast<Index>(meta.replicate_ids[i]));
  law.meta = std::move(meta);
  return law;
}

}  // namespace

void LimitLawSpec::validate(const Dag& dag) const {
  check_law_dims(true_signal, dag, "true signal");
  if (!(lambda_f0 >= 0) || !(lambda_ni0 >= 0) || !std::isfinite(lambda_f0) ||
      !std::isfinite(lambda_ni0))
    throw PreconditionViolation("limit penalties must be finite and nonnegative");
  if (!(q > 0) || !std::isfinite(q)) throw PreconditionViolation("rate exponent q must be > 0");
  if (!(eq_tol >= 0)) throw PreconditionViolation("eq_tol must be >= 0");
}

EdgeClassification classify_edges(const LimitLawSpec& spec, const Dag& dag) {
  check_law_dims(spec.true_signal, dag, "true signal");
  EdgeClassification cls;
  for (Index e = 0; e < dag.n_edges(); ++e) {
    const double d = spec.true_signal(dag.edge(e).source) - spec.true_signal(dag.edge(e).target);
    if (std::abs(d) <= spec.eq_tol)
      cls.eq_edges.push_back(e);
    else if (d > spec.eq_tol)
      cls.pos_edges.push_back(e);
    else
      cls.neg_edges.push_back(e);
  }
  return cls;
}

Signal<double> linear_shift(const LimitLawSpec& spec, const Dag& dag,
                            const EdgeClassification& cls) {
  Signal<double> c = Signal<double>::Zero(dag.n_vertices());
  auto add = [&](Index e, double weight) {
    c(dag.edge(e).source) += weight;
    c(dag.edge(e).target) -= weight;
  };
  for (Index e : cls.pos_edges) add(e, spec.lambda_f0 + spec.lambda_ni0);
  for (Index e : cls.neg_edges) add(e, -spec.lambda_f0);
  return c;
}

double objective_V(const Signal<double>& w, const Signal<double>& psi, const LimitLawSpec& spec,
                   const Dag& dag) {
  check_law_dims(w, dag, "w");
  check_law_dims(psi, dag, "psi");
  check_law_dims(spec.true_signal, dag, "true signal");
  const auto& b = spec.true_signal;
  double v = -2.0 * psi.dot(w) + w.dot(w);
  for (const Edge& e : dag.edges()) {
    const double db = b(e.source) - b(e.target);
    const double dw = w(e.source) - w(e.target);
    if (std::abs(db) <= spec.eq_tol) {
      v += spec.lambda_f0 * std::abs(dw) + spec.lambda_ni0 * std::max(dw, 0.0);
    } else {
      v += spec.lambda_f0 * dw * (db > 0 ? 1.0 : -1.0);
      if (db > 0) v += spec.lambda_ni0 * dw;
    }
  }
  return v;
}

Signal<double> limit_law_solve(const Signal<double>& psi, const LimitLawSpec& spec,
                               const Dag& dag, const SolverConfig<double>& cfg) {
  check_law_dims(psi, dag, "psi");
  spec.validate(dag);
  const auto cls = classify_edges(spec, dag);
  const Signal<double> target = psi - 0.5 * linear_shift(spec, dag, cls);
  const Dag eq_graph = dag.edge_subgraph(cls.eq_edges);
  const PenaltyConfig<double> half{0.5 * spec.lambda_f0, 0.5 * spec.lambda_ni0};
  return require_converged(solve(target, eq_graph, half, cfg)).beta;
}

Rng replicate_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return Rng(seq);
}

void validate_probability_vector(const Signal<double>& p) {
  if (p.size() == 0) throw InvalidProbabilityVector("probability vector is empty");
  if (!p.allFinite() || (p.array() < 0.0).any())
    throw InvalidProbabilityVector("probability vector has negative or non-finite entries");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw InvalidProbabilityVector("probability vector sums to " + std::to_string(p.sum()));
}

Signal<double> sample_psi_multinomial(const Signal<double>& p, Rng& rng) {
  validate_probability_vector(p);
  std::normal_distribution<double> normal;
  Signal<double> z(p.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const Signal<double> u = p.cwiseSqrt();
  return u.cwiseProduct(z - u.dot(z) * u);
}

Signal<double> sample_empirical_pmf(const Signal<double>& p, std::uint64_t n, Rng& rng) {
  validate_probability_vector(p);
  if (n < 1) throw PreconditionViolation("sample size must be >= 1");
  // Multinomial counts as a chain of conditional binomials: same law as
  // tallying n categorical draws.
  Signal<double> counts = Signal<double>::Zero(p.size());
  std::uint64_t remaining = n;
  double mass = 1.0;
  for (Index i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double prob = mass > 0 ? std::clamp(p(i) / mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::uint64_t> binom(remaining, prob);
    const std::uint64_t c = binom(rng);
    counts(i) = static_cast<double>(c);
    remaining -= c;
    mass -= p(i);
  }
  counts(p.size() - 1) += static_cast<double>(remaining);
  return counts / static_cast<double>(n);
}

PenaltyConfig<double> finite_sample_penalty(const PenaltyConfig<double>& lambda0, std::uint64_t n,
                                            double q) {
  const double scale = 1.0 / (2.0 * std::pow(static_cast<double>(n), q));
  return {lambda0.lambda_fused * scale, lambda0.lambda_ni * scale};
}

EmpiricalLaw mc_finite_sample(const Signal<double>& p, const Dag& dag, std::uint64_t n,
                              const PenaltyConfig<double>& lambda0, double q, std::size_t reps,
                              std::uint64_t seed, const MonteCarloOptions& options) {
  validate_probability_vector(p);
  check_law_dims(p, dag, "p");
  lambda0.validate();
  if (n < 1) throw PreconditionViolation("sample size must be >= 1");
  if (reps < 1) throw PreconditionViolation("reps must be >= 1");
  if (!(q > 0)) throw PreconditionViolation("rate exponent q must be > 0");

  const PenaltyConfig<double> pen = finite_sample_penalty(lambda0, n, q);
  const double scale = std::pow(static_cast<double>(n), q);
  Eigen::MatrixXd rows(static_cast<Index>(reps), p.size());
  std::vector<char> ok(reps, 0);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    Rng rng = replicate_stream(seed, StreamPurpose::kFiniteSample, r);
    const Signal<double> pmf = sample_empirical_pmf(p, n, rng);
    const auto fit = solve(pmf, dag, pen, options.solver);
    if (!fit.converged) return;
    rows.row(static_cast<Index>(r)) = (scale * (fit.beta - p)).transpose();
    ok[r] = 1;
  });

  LawMeta meta;
  meta.kind = "finite_sample";
  meta.sample_size = n;
  meta.q = q;
  meta.lambda_f0 = lambda0.lambda_fused;
  meta.lambda_ni0 = lambda0.lambda_ni;
  meta.reps_requested = reps;
  return collect(rows, ok, seed, std::move(meta));
}

EmpiricalLaw mc_limit(const Signal<double>& p, const LimitLawSpec& spec, const Dag& dag,
                      std::size_t reps, std::uint64_t seed, const MonteCarloOptions& options) {
  validate_probability_vector(p);
  check_law_dims(p, dag, "p");
  spec.validate(dag);
  if (reps < 1) throw PreconditionViolation("reps must be >= 1");

  Eigen::MatrixXd rows(static_cast<Index>(reps), p.size());
  std::vector<char> ok(reps, 0);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    Rng rng = replicate_stream(seed, StreamPurpose::kLimit, r);
    const Signal<double> psi = sample_psi_multinomial(p, rng);
    try {
      rows.row(static_cast<Index>(r)) = limit_law_solve(psi, spec, dag, options.solver).transpose();
      ok[r] = 1;
    } catch (const NotConverged&) {
    }
  });

  LawMeta meta;
  meta.kind = "limit";
  meta.q = spec.q;
  meta.lambda_f0 = spec.lambda_f0;
  meta.lambda_ni0 = spec.lambda_ni0;
  meta.reps_requested = reps;
  return collect(rows, ok, seed, std::move(meta));
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyInput("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

LawComparison compare_laws(const EmpiricalLaw& a, const EmpiricalLaw& b, double ks_resolution) {
  if (a.samples.cols() != b.samples.cols())
    throw DimensionMismatch("laws have different dimensions");
  if (a.samples.rows() == 0 || b.samples.rows() == 0)
    throw EmptyInput("cannot compare an empty law");
  if (!(ks_resolution >= 0) || !std::isfinite(ks_resolution))
    throw PreconditionViolation("ks_resolution must be finite and >= 0");
  const auto snap = [ks_resolution](const auto& col) {
    std::vector<double> out(col.begin(), col.end());
    if (ks_resolution > 0)
      for (double& x : out) x = std::round(x / ks_resolution) * ks_resolution;
    return out;
  };
  LawComparison cmp;
  cmp.ks_resolution = ks_resolution;
  for (Index c = 0; c < a.samples.cols(); ++c) {
    std::vector<double> ca = snap(a.samples.col(c));
    std::vector<double> cb = snap(b.samples.col(c));
    cmp.per_coord_ks.push_back(ks_statistic(std::move(ca), std::move(cb)));
  }
  cmp.mean_gap = (a.samples.colwise().mean() - b.samples.colwise().mean())
                     .lpNorm<Eigen::Infinity>();
  cmp.cov_gap = (sample_covariance(a.samples) - sample_covariance(b.samples))
                    .lpNorm<Eigen::Infinity>();
  return cmp;
}

DecompositionReport decomposition_check(const Signal<double>& psi, const LimitLawSpec& spec,
                                        const Dag& dag, const SolverConfig<double>& cfg) {
  check_law_dims(psi, dag, "psi");
  spec.validate(dag);
  if (spec.lambda_f0 != 0.0)
    throw PreconditionViolation("decomposition check requires lambda_f0 = 0");
  const auto& b = spec.true_signal;
  for (const Edge& e : dag.edges())
    if (b(e.source) - b(e.target) > spec.eq_tol)
      throw PreconditionViolation("true signal is not isotonic along edge (" +
                                  std::to_string(e.source) + "," + std::to_string(e.target) +
                                  ")");

  const Signal<double> joint = limit_law_solve(psi, spec, dag, cfg);

  // Independent route: one nearly-isotonic fit of psi per constant region.
  const auto regions = connected_components(dag, [&](Index e) {
    return std::abs(b(dag.edge(e).source) - b(dag.edge(e).target)) <= spec.eq_tol;
  });
  std::vector<Index> local(static_cast<std::size_t>(dag.n_vertices()), -1);
  std::vector<Index> region_of(static_cast<std::size_t>(dag.n_vertices()), -1);
  for (std::size_t r = 0; r < regions.size(); ++r)
    for (std::size_t k = 0; k < regions[r].size(); ++k) {
      local[static_cast<std::size_t>(regions[r][k])] = static_cast<Index>(k);
      region_of[static_cast<std::size_t>(regions[r][k])] = static_cast<Index>(r);
    }

  Signal<double> concatenated(dag.n_vertices());
  const PenaltyConfig<double> pen{0.0, 0.5 * spec.lambda_ni0};
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& members = regions[r];
    std::vector<Edge> edges;
    for (const Edge& e : dag.edges())
      if (region_of[static_cast<std::size_t>(e.source)] == static_cast<Index>(r) &&
          region_of[static_cast<std::size_t>(e.target)] == static_cast<Index>(r))
        edges.push_back({local[static_cast<std::size_t>(e.source)],
                         local[static_cast<std::size_t>(e.target)]});
    const Dag sub = Dag::from_edge_list(static_cast<Index>(members.size()), std::move(edges));
    Signal<double> target(sub.n_vertices());
    for (std::size_t k = 0; k < members.size(); ++k) target(static_cast<Index>(k)) = psi(members[k]);
    const auto fit = require_converged(solve(target, sub, pen, cfg)).beta;
    for (std::size_t k = 0; k < members.size(); ++k) concatenated(members[k]) = fit(static_cast<Index>(k));
  }

  DecompositionReport report;
  report.max_gap = (joint - concatenated).lpNorm<Eigen::Infinity>();
  report.regions = regions.size();
  return report;
}

}  // namespace dagfuse
