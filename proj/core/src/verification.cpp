#include "deterrence/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "deterrence/errors.hpp"

namespace deterrence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double OutcomeTable::total() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.p;
  return s;
}

double OutcomeTable::theta_marginal(Profile theta) const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.theta == theta) s += e.p;
  }
  return s;
}

double OutcomeTable::report_marginal(Profile a) const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.a == a) s += e.p;
  }
  return s;
}

double OutcomeTable::report_and_outcome(Profile a, bool convicted) const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.a == a && e.convicted == convicted) s += e.p;
  }
  return s;
}

double OutcomeTable::conviction_probability() const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.convicted) s += e.p;
  }
  return s;
}

OutcomeTable enumerate_outcomes(const StrategyProfile& profile) {
  OutcomeTable table;
  table.n = profile.n();
  const auto& q = profile.rule().values();
  for (const auto& [theta, pt] : profile.prior()) {
    for (Profile a = 0; a < q.size(); ++a) {
      double pa = pt * report_profile_likelihood(profile, theta, a);
      table.entries.push_back({theta, a, false, pa * (1.0 - q[a])});
      table.entries.push_back({theta, a, true, pa * q[a]});
    }
  }
  return table;
}

double principal_payoff(const StrategyProfile& profile, Profile theta) {
  if (theta > full_profile(profile.n())) throw DomainError("offense profile exceeds n");
  return popcount(theta) - profile.params().L * conviction_probability(profile, theta);
}

double Diagnostics::max_gap() const {
  return std::max({principal_gap, agent_gap, judge_gap});
}

namespace {

double principal_gap_of(const StrategyProfile& profile) {
  double L = profile.params().L;
  auto delta = conviction_increase_over_innocence(profile);
  double best_o = -kInf;
  double best_v = -kInf;
  for (Profile theta = 0; theta < delta.size(); ++theta) {
    best_o = std::max(best_o, popcount(theta) - L * delta[theta]);
    best_v = std::max(best_v, -L * delta[theta]);
  }
  double gap = 0.0;
  if (profile.params().pi_o > 0.0) {
    for (const auto& [theta, p] : profile.principal().opportunistic.support()) {
      gap = std::max(gap, best_o - (popcount(theta) - L * delta[theta]));
    }
  }
  if (profile.params().pi_o < 1.0) gap = std::max(gap, best_v);
  return gap;
}

// Best-response cutoffs for agent i; NaN for null conditioning events.
AgentCutoffs best_response_for(const StrategyProfile& profile, int i) {
  const auto& params = profile.params();
  const auto& q = profile.rule().values();
  Profile bit = Profile{1} << i;

  auto convict = q;
  detail::kernel_forward(profile, convict, i);
  std::vector<double> pivot(q.size());
  for (Profile a = 0; a < q.size(); ++a) {
    Profile lo = a & ~bit;
    pivot[a] = q[lo | bit] - q[lo];
  }
  detail::kernel_forward(profile, pivot, i);

  double mass[2] = {0.0, 0.0};
  double p1[2] = {0.0, 0.0};
  double d[2] = {0.0, 0.0};
  for (const auto& [theta, p] : profile.prior()) {
    int t = has_bit(theta, i) ? 1 : 0;
    Profile others = theta & ~bit;
    mass[t] += p;
    p1[t] += p * convict[others | bit];
    d[t] += p * pivot[others];
  }
  double out[2];
  for (int t = 0; t < 2; ++t) {
    if (!(mass[t] > 0.0)) {
      out[t] = kNaN;
      continue;
    }
    double P1 = p1[t] / mass[t];
    double D = d[t] / mass[t];
    double E = 1.0 - P1;
    if (!(D > 0.0)) {
      out[t] = E > 0.0 ? -kInf : kInf;
      continue;
    }
    out[t] = params.b * t - params.c * E / D;
  }
  return {out[1], out[0]};
}

double cutoff_gap(double stated, double best) {
  if (std::isnan(best)) return 0.0;
  if (std::isinf(best)) return stated == best ? 0.0 : kInf;
  return std::abs(stated - best);
}

double judge_gap_of(const StrategyProfile& profile) {
  double pi_star = profile.params().pi_star;
  const auto& q = profile.rule().values();
  std::vector<double> post;
  if (profile.adjudication() == Adjudication::Aggregate) {
    post = posterior_aggregate_all(profile);
  } else {
    auto spec = posterior_specific_all(profile);
    post.resize(spec.size());
    for (std::size_t a = 0; a < spec.size(); ++a) {
      post[a] = *std::max_element(spec[a].begin(), spec[a].end());
    }
  }
  double gap = 0.0;
  for (Profile a = 0; a < q.size(); ++a) {
    double g;
    if (q[a] <= 0.0) {
      g = std::max(0.0, post[a] - pi_star);
    } else if (q[a] >= 1.0) {
      g = std::max(0.0, pi_star - post[a]);
    } else {
      g = std::abs(post[a] - pi_star);
    }
    gap = std::max(gap, g);
  }
  return gap;
}

}  // namespace

Diagnostics best_response_residuals(const StrategyProfile& profile) {
  Diagnostics diag;
  diag.principal_gap = principal_gap_of(profile);
  for (int i = 0; i < profile.n(); ++i) {
    AgentCutoffs br = best_response_for(profile, i);
    const auto& stated = profile.cutoffs()[i];
    diag.agent_gap = std::max({diag.agent_gap, cutoff_gap(stated.omega_star, br.omega_star),
                               cutoff_gap(stated.omega_star2, br.omega_star2)});
    diag.best_response.push_back(br);
  }
  diag.judge_gap = judge_gap_of(profile);
  if (profile.n() >= 2) {
    try {
      diag.correlation = offense_correlation(profile, 0, 1);
    } catch (const DomainError&) {
    }
  }
  if (profile.n() == 2) diag.substitutes = substitutes_index(profile.rule());
  if (prior_guilt(profile) > 0.0) diag.per_profile_informativeness = informativeness_all(profile);
  return diag;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DETERRENCE_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

namespace {

// SplitMix64; one independent stream per draw index.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t index)
      : state_(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }
  // Uniform on the open interval (0, 1).
  double uniform() { return ((next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

struct Counts {
  std::vector<std::uint64_t> report_outcome;
  std::vector<std::uint64_t> theta;
  std::vector<std::uint64_t> guilty_by_report;

  explicit Counts(std::size_t profiles)
      : report_outcome(2 * profiles, 0), theta(profiles, 0), guilty_by_report(profiles, 0) {}

  void merge(const Counts& o) {
    for (std::size_t j = 0; j < report_outcome.size(); ++j) report_outcome[j] += o.report_outcome[j];
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += o.theta[j];
    for (std::size_t j = 0; j < guilty_by_report.size(); ++j) guilty_by_report[j] += o.guilty_by_report[j];
  }
};

void simulate_range(const StrategyProfile& profile, std::uint64_t seed, std::uint64_t begin,
                    std::uint64_t end, Counts& counts) {
  const auto& params = profile.params();
  const auto& support = profile.principal().opportunistic.support();
  const auto& q = profile.rule().values();
  int n = profile.n();
  for (std::uint64_t d = begin; d < end; ++d) {
    DrawStream rng(seed, d);
    Profile theta = 0;
    if (rng.uniform() < params.pi_o) {
      double u = rng.uniform();
      double acc = 0.0;
      theta = support.back().first;
      for (const auto& [t, p] : support) {
        acc += p;
        if (u < acc) {
          theta = t;
          break;
        }
      }
    }
    Profile a = 0;
    for (int i = 0; i < n; ++i) {
      bool witnessed = has_bit(theta, i);
      bool accuse;
      if (rng.uniform() < params.delta) {
        double omega = params.shock.quantile(rng.uniform());
        const auto& ct = profile.cutoffs()[i];
        accuse = omega <= (witnessed ? ct.omega_star : ct.omega_star2);
      } else {
        accuse = rng.uniform() < params.alpha;
      }
      if (accuse) a |= Profile{1} << i;
    }
    bool convicted = rng.uniform() < q[a];
    counts.report_outcome[2 * a + (convicted ? 1 : 0)]++;
    counts.theta[theta]++;
    if (theta != 0) counts.guilty_by_report[a]++;
  }
}

EventEstimate estimate(std::uint64_t count, double analytic, std::uint64_t draws) {
  EventEstimate e;
  e.count = count;
  e.freq = static_cast<double>(count) / static_cast<double>(draws);
  e.analytic = analytic;
  double p = std::clamp(analytic, 0.0, 1.0);
  e.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  return e;
}

}  // namespace

double MonteCarloReport::max_abs_z() const {
  double worst = 0.0;
  auto scan = [&](const std::vector<EventEstimate>& events) {
    for (const auto& e : events) {
      double diff = std::abs(e.freq - e.analytic);
      if (e.std_err > 0.0) {
        worst = std::max(worst, diff / e.std_err);
      } else if (diff > 0.0) {
        worst = kInf;
      }
    }
  };
  scan(report_outcome);
  scan(report);
  scan(theta);
  return worst;
}

MonteCarloReport monte_carlo(const StrategyProfile& profile, std::uint64_t draws,
                             std::uint64_t seed) {
  if (draws < 1) throw DomainError("draws must be >= 1");
  std::size_t profiles = std::size_t{1} << profile.n();
  Counts total(profiles);

  unsigned workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(1, draws / 4096));
  workers = std::max(1u, workers);
  std::vector<Counts> partial(workers, Counts(profiles));
  std::vector<std::thread> threads;
  std::uint64_t chunk = draws / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t begin = w * chunk;
    std::uint64_t end = (w + 1 == workers) ? draws : begin + chunk;
    threads.emplace_back([&, w, begin, end] { simulate_range(profile, seed, begin, end, partial[w]); });
  }
  for (auto& t : threads) t.join();
  for (const auto& c : partial) total.merge(c);

  MonteCarloReport report;
  report.draws = draws;
  report.seed = seed;
  report.n = profile.n();

  auto table = enumerate_outcomes(profile);
  std::vector<double> p_as(2 * profiles, 0.0), p_a(profiles, 0.0), p_theta(profiles, 0.0);
  for (const auto& e : table.entries) {
    p_as[2 * e.a + (e.convicted ? 1 : 0)] += e.p;
    p_a[e.a] += e.p;
    p_theta[e.theta] += e.p;
  }
  for (std::size_t j = 0; j < 2 * profiles; ++j) {
    report.report_outcome.push_back(estimate(total.report_outcome[j], p_as[j], draws));
  }
  auto analytic_post = posterior_aggregate_all(profile);
  for (std::size_t a = 0; a < profiles; ++a) {
    std::uint64_t ca = total.report_outcome[2 * a] + total.report_outcome[2 * a + 1];
    report.report.push_back(estimate(ca, p_a[a], draws));
    report.theta.push_back(estimate(total.theta[a], p_theta[a], draws));
    report.empirical_posteriors.push_back(
        ca > 0 ? static_cast<double>(total.guilty_by_report[a]) / static_cast<double>(ca) : kNaN);
    report.analytic_posteriors.push_back(analytic_post[a]);
  }
  return report;
}

}  // namespace deterrence
