#include "deterrence/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "deterrence/errors.hpp"

namespace deterrence {

namespace {

constexpr double kSumTolerance = 1e-12;

void require_prob_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0,1), got " << v;
    throw DomainError(os.str());
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    throw DomainError(os.str());
  }
}

void require_n(int n) {
  if (n < 1 || n > kMaxAgents) {
    throw DomainError("n must lie in [1," + std::to_string(kMaxAgents) + "], got " +
                      std::to_string(n));
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

}  // namespace

void GameParams::validate() const {
  require_n(n);
  require_positive(b, "b");
  require_positive(c, "c");
  require_positive(L, "L");
  require_prob_open(delta, "delta");
  require_prob_open(alpha, "alpha");
  require_prob_open(pi_star, "pi_star");
  if (!(pi_o > 0.0 && pi_o <= 1.0)) {
    throw DomainError("pi_o must lie in (0,1], got " + std::to_string(pi_o));
  }
  if (gamma != 0.0) {
    throw DomainError("gamma must be 0 (social preferences are not supported)");
  }
  if (!std::isfinite(shock.mean())) throw DomainError("mu must be finite");
  require_positive(shock.std_dev(), "sigma");
}

OffenseDistribution::OffenseDistribution(int n, std::vector<Entry> masses) : n_(n) {
  require_n(n);
  std::map<Profile, double> merged;
  double total = 0.0;
  for (const auto& [theta, p] : masses) {
    if (theta > full_profile(n)) throw DomainError("offense profile exceeds n agents");
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("offense mass must be >= 0");
    total += p;
    if (p > 0.0) merged[theta] += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "offense distribution must sum to 1, got " << total;
    throw DomainError(os.str());
  }
  support_.assign(merged.begin(), merged.end());
}

OffenseDistribution OffenseDistribution::independent(std::span<const double> marginals) {
  int n = static_cast<int>(marginals.size());
  require_n(n);
  for (double m : marginals) {
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("marginal must lie in [0,1]");
  }
  std::vector<Entry> masses;
  for (Profile theta = 0; theta <= full_profile(n); ++theta) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= has_bit(theta, i) ? marginals[i] : 1.0 - marginals[i];
    masses.emplace_back(theta, p);
  }
  return OffenseDistribution(n, std::move(masses));
}

OffenseDistribution OffenseDistribution::point_mass(int n, Profile theta) {
  return OffenseDistribution(n, {{theta, 1.0}});
}

OffenseDistribution OffenseDistribution::symmetric_kr(int n, int k, double r) {
  require_n(n);
  if (k < 1 || k > n) throw DomainError("k must lie in [1,n]");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0,1]");
  std::vector<Entry> masses;
  double wk = (1.0 - r) / binomial(n, k);
  double wk1 = r / binomial(n, k - 1);
  for (Profile theta = 0; theta <= full_profile(n); ++theta) {
    int m = popcount(theta);
    if (m == k && wk > 0.0) masses.emplace_back(theta, wk);
    if (m == k - 1 && wk1 > 0.0) masses.emplace_back(theta, wk1);
  }
  // Rescale away the rounding left by dividing through binomials.
  double total = 0.0;
  for (const auto& e : masses) total += e.second;
  for (auto& e : masses) e.second /= total;
  return OffenseDistribution(n, std::move(masses));
}

double OffenseDistribution::prob(Profile theta) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), theta,
                             [](const Entry& e, Profile t) { return e.first < t; });
  return (it != support_.end() && it->first == theta) ? it->second : 0.0;
}

double OffenseDistribution::marginal(int i) const {
  double s = 0.0;
  for (const auto& [theta, p] : support_) {
    if (has_bit(theta, i)) s += p;
  }
  return s;
}

PrincipalStrategy PrincipalStrategy::symmetric(int n, int k, double r) {
  return {OffenseDistribution::symmetric_kr(n, k, r), KrTag{k, r}};
}

ConvictionRule ConvictionRule::table(int n, std::vector<double> q) {
  require_n(n);
  if (q.size() != (std::size_t{1} << n)) {
    throw DomainError("conviction table must have 2^n entries");
  }
  ConvictionRule rule;
  rule.n_ = n;
  rule.q_ = std::move(q);
  rule.validate();
  return rule;
}

ConvictionRule ConvictionRule::symmetric(std::vector<double> q_by_count) {
  int n = static_cast<int>(q_by_count.size()) - 1;
  require_n(n);
  std::vector<double> q(std::size_t{1} << n);
  for (Profile a = 0; a < q.size(); ++a) q[a] = q_by_count[popcount(a)];
  ConvictionRule rule;
  rule.n_ = n;
  rule.q_ = std::move(q);
  rule.by_count_ = std::move(q_by_count);
  rule.validate();
  return rule;
}

ConvictionRule ConvictionRule::linear(int n, double q_step) {
  std::vector<double> qm(n + 1);
  for (int m = 0; m <= n; ++m) qm[m] = q_step * m;
  return symmetric(std::move(qm));
}

ConvictionRule ConvictionRule::never(int n) {
  return symmetric(std::vector<double>(n + 1, 0.0));
}

void ConvictionRule::validate() const {
  for (double v : q_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("conviction probabilities must lie in [0,1]");
    }
  }
  if (q_[0] != 0.0) {
    throw DomainError("refinement 1 violated: q(0,...,0) must be 0");
  }
  for (Profile a = 0; a < q_.size(); ++a) {
    for (int i = 0; i < n_; ++i) {
      if (!has_bit(a, i) && q_[a | (Profile{1} << i)] < q_[a]) {
        throw DomainError("refinement 2 violated: q must be nondecreasing in accusations");
      }
    }
  }
}

bool ConvictionRule::every_agent_pivotal() const {
  for (int i = 0; i < n_; ++i) {
    bool pivotal = false;
    for (Profile a = 0; a < q_.size() && !pivotal; ++a) {
      if (!has_bit(a, i) && q_[a | (Profile{1} << i)] > q_[a]) pivotal = true;
    }
    if (!pivotal) return false;
  }
  return true;
}

StrategyProfile::StrategyProfile(GameParams params, PrincipalStrategy principal,
                                 std::vector<AgentCutoffs> cutoffs, ConvictionRule rule,
                                 Adjudication adjudication)
    : params_(params),
      principal_(std::move(principal)),
      cutoffs_(std::move(cutoffs)),
      rule_(std::move(rule)),
      adjudication_(adjudication) {
  params_.validate();
  int n = params_.n;
  if (principal_.opportunistic.n() != n) throw DomainError("principal strategy has wrong n");
  if (rule_.n() != n) throw DomainError("conviction rule has wrong n");
  if (static_cast<int>(cutoffs_.size()) != n) throw DomainError("need one cutoff pair per agent");
  for (const auto& ct : cutoffs_) {
    if (std::isnan(ct.omega_star) || std::isnan(ct.omega_star2)) {
      throw DomainError("cutoffs must not be NaN");
    }
  }
  psi_star_.resize(n);
  psi_star2_.resize(n);
  psi_gap_.resize(n);
  for (int i = 0; i < n; ++i) {
    psi_star_[i] = params_.psi(cutoffs_[i].omega_star);
    psi_star2_[i] = params_.psi(cutoffs_[i].omega_star2);
    psi_gap_[i] = params_.delta * params_.shock.cdf_difference(cutoffs_[i].omega_star,
                                                             cutoffs_[i].omega_star2);
  }
  std::map<Profile, double> merged;
  merged[0] = 1.0 - params_.pi_o;
  for (const auto& [theta, p] : principal_.opportunistic.support()) {
    merged[theta] += params_.pi_o * p;
  }
  prior_.assign(merged.begin(), merged.end());
}

StrategyProfile StrategyProfile::symmetric(GameParams params, PrincipalStrategy principal,
                                           AgentCutoffs cutoffs, ConvictionRule rule,
                                           Adjudication adjudication) {
  params.validate();
  std::vector<AgentCutoffs> all(params.n, cutoffs);
  return StrategyProfile(params, std::move(principal), std::move(all), std::move(rule),
                         adjudication);
}

double StrategyProfile::prior_prob(Profile theta) const {
  for (const auto& [t, p] : prior_) {
    if (t == theta) return p;
  }
  return 0.0;
}

namespace detail {

void kernel_forward(const StrategyProfile& profile, std::vector<double>& f, int skip_agent) {
  int n = profile.n();
  std::size_t size = f.size();
  for (int j = 0; j < n; ++j) {
    if (j == skip_agent) continue;
    Profile bit = Profile{1} << j;
    double hit = profile.accusation_prob(j, true);
    double miss = profile.accusation_prob(j, false);
    for (Profile x = 0; x < size; ++x) {
      if (x & bit) continue;
      double f0 = f[x];
      double f1 = f[x | bit];
      f[x] = f0 + miss * (f1 - f0);
      f[x | bit] = f0 + hit * (f1 - f0);
    }
  }
}

void kernel_backward(const StrategyProfile& profile, std::vector<double>& mu, int skip_agent) {
  int n = profile.n();
  std::size_t size = mu.size();
  for (int j = 0; j < n; ++j) {
    if (j == skip_agent) continue;
    Profile bit = Profile{1} << j;
    double hit = profile.accusation_prob(j, true);
    double miss = profile.accusation_prob(j, false);
    for (Profile x = 0; x < size; ++x) {
      if (x & bit) continue;
      double m0 = mu[x];
      double m1 = mu[x | bit];
      mu[x] = (1.0 - miss) * m0 + (1.0 - hit) * m1;
      mu[x | bit] = miss * m0 + hit * m1;
    }
  }
}

std::vector<double> dense_prior(const StrategyProfile& profile) {
  std::vector<double> mu(std::size_t{1} << profile.n(), 0.0);
  for (const auto& [theta, p] : profile.prior()) mu[theta] += p;
  return mu;
}

}  // namespace detail

double aggregate_guilt_prior(const OffenseDistribution& d) {
  double s = 0.0;
  for (const auto& [theta, p] : d.support()) {
    if (theta != 0) s += p;
  }
  return s;
}

double aggregate_guilt_prior(const PrincipalStrategy& s) {
  return aggregate_guilt_prior(s.opportunistic);
}

double prior_guilt(const StrategyProfile& profile) {
  double s = 0.0;
  for (const auto& [theta, p] : profile.prior()) {
    if (theta != 0) s += p;
  }
  return s;
}

double report_profile_likelihood(const StrategyProfile& profile, Profile theta, Profile a) {
  double out = 1.0;
  for (int i = 0; i < profile.n(); ++i) {
    double psi = profile.accusation_prob(i, has_bit(theta, i));
    out *= has_bit(a, i) ? psi : 1.0 - psi;
  }
  return out;
}

std::vector<double> report_probabilities(const StrategyProfile& profile) {
  auto mu = detail::dense_prior(profile);
  detail::kernel_backward(profile, mu);
  return mu;
}

std::vector<double> posterior_aggregate_all(const StrategyProfile& profile) {
  auto guilty = detail::dense_prior(profile);
  double innocent_mass = guilty[0];
  guilty[0] = 0.0;
  detail::kernel_backward(profile, guilty);
  std::vector<double> out(guilty.size());
  for (Profile a = 0; a < out.size(); ++a) {
    double innocent = innocent_mass * report_profile_likelihood(profile, 0, a);
    double total = guilty[a] + innocent;
    if (!(total > 0.0)) throw std::logic_error("report profile has zero probability");
    out[a] = guilty[a] / total;
  }
  return out;
}

double posterior_aggregate(const StrategyProfile& profile, Profile a) {
  double guilty = 0.0;
  double total = 0.0;
  for (const auto& [theta, p] : profile.prior()) {
    double w = p * report_profile_likelihood(profile, theta, a);
    total += w;
    if (theta != 0) guilty += w;
  }
  if (!(total > 0.0)) throw std::logic_error("report profile has zero probability");
  return guilty / total;
}

double posterior_specific(const StrategyProfile& profile, int i, Profile a) {
  double hit = 0.0;
  double total = 0.0;
  for (const auto& [theta, p] : profile.prior()) {
    double w = p * report_profile_likelihood(profile, theta, a);
    total += w;
    if (has_bit(theta, i)) hit += w;
  }
  if (!(total > 0.0)) throw std::logic_error("report profile has zero probability");
  return hit / total;
}

std::vector<std::vector<double>> posterior_specific_all(const StrategyProfile& profile) {
  int n = profile.n();
  auto total = report_probabilities(profile);
  std::vector<std::vector<double>> out(total.size(), std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    auto mu = detail::dense_prior(profile);
    for (Profile theta = 0; theta < mu.size(); ++theta) {
      if (!has_bit(theta, i)) mu[theta] = 0.0;
    }
    detail::kernel_backward(profile, mu);
    for (Profile a = 0; a < mu.size(); ++a) out[a][i] = mu[a] / total[a];
  }
  return out;
}

JudgeDecision classify_posterior(double posterior, double pi_star) {
  if (std::abs(posterior - pi_star) <= kJudgeTolerance * pi_star) {
    return JudgeDecision::Indifferent;
  }
  return posterior > pi_star ? JudgeDecision::Convict : JudgeDecision::Acquit;
}

JudgeDecision judge_app(double posterior, double pi_star) {
  return classify_posterior(posterior, pi_star);
}

std::vector<JudgeDecision> judge_app(std::span<const double> posteriors, double pi_star) {
  std::vector<JudgeDecision> out;
  out.reserve(posteriors.size());
  for (double p : posteriors) out.push_back(classify_posterior(p, pi_star));
  return out;
}

JudgeDecision judge_dpp(std::span<const double> specific_posteriors, double pi_star) {
  if (specific_posteriors.empty()) return JudgeDecision::Acquit;
  return classify_posterior(
      *std::max_element(specific_posteriors.begin(), specific_posteriors.end()), pi_star);
}

std::vector<JudgeDecision> judge_dpp(const std::vector<std::vector<double>>& per_profile,
                                     double pi_star) {
  std::vector<JudgeDecision> out;
  out.reserve(per_profile.size());
  for (const auto& v : per_profile) out.push_back(judge_dpp(std::span<const double>(v), pi_star));
  return out;
}

SubstitutesResult substitutes_index(const ConvictionRule& rule) {
  if (rule.n() != 2) throw DomainError("substitutes_index requires n = 2");
  double idx = rule(0b11) + rule(0b00) - rule(0b01) - rule(0b10);
  SubstitutesResult out{idx, Interaction::Neutral};
  if (idx > kInteractionTolerance) out.kind = Interaction::Substitutes;
  if (idx < -kInteractionTolerance) out.kind = Interaction::Complements;
  return out;
}

std::vector<double> conviction_given_theta(const StrategyProfile& profile) {
  auto f = profile.rule().values();
  detail::kernel_forward(profile, f);
  return f;
}

double conviction_probability(const StrategyProfile& profile, Profile theta) {
  double s = 0.0;
  const auto& q = profile.rule().values();
  for (Profile a = 0; a < q.size(); ++a) {
    if (q[a] != 0.0) s += q[a] * report_profile_likelihood(profile, theta, a);
  }
  return s;
}

namespace {

// Pr(s | theta_i=1, theta_-i) - Pr(s | theta_i=0, theta_-i), indexed by theta
// (bit i ignored).
std::vector<double> pivot_increments(const StrategyProfile& profile, int i) {
  const auto& q = profile.rule().values();
  Profile bit = Profile{1} << i;
  std::vector<double> g(q.size());
  for (Profile a = 0; a < q.size(); ++a) {
    Profile lo = a & ~bit;
    g[a] = q[lo | bit] - q[lo];
  }
  detail::kernel_forward(profile, g, i);
  double gap = profile.accusation_gap(i);
  for (double& v : g) v *= gap;
  return g;
}

}  // namespace

std::vector<double> conviction_increase_over_innocence(const StrategyProfile& profile) {
  int n = profile.n();
  std::vector<std::vector<double>> inc(n);
  for (int i = 0; i < n; ++i) inc[i] = pivot_increments(profile, i);
  std::vector<double> delta(std::size_t{1} << n, 0.0);
  for (Profile theta = 1; theta < delta.size(); ++theta) {
    int i = __builtin_ctz(theta);
    Profile rest = theta & (theta - 1);
    delta[theta] = delta[rest] + inc[i][rest];
  }
  return delta;
}

double marginal_conviction_increase(const StrategyProfile& profile, int i,
                                    Profile theta_minus_i) {
  if (i < 0 || i >= profile.n()) throw DomainError("agent index out of range");
  Profile bit = Profile{1} << i;
  theta_minus_i &= ~bit;
  if (profile.n() <= 2) {
    const auto& q = profile.rule().values();
    double s = 0.0;
    for (Profile a = 0; a < q.size(); ++a) {
      if (a & bit) continue;
      double w = 1.0;
      for (int j = 0; j < profile.n(); ++j) {
        if (j == i) continue;
        double psi = profile.accusation_prob(j, has_bit(theta_minus_i, j));
        w *= has_bit(a, j) ? psi : 1.0 - psi;
      }
      s += w * (q[a | bit] - q[a]);
    }
    return s * profile.accusation_gap(i);
  }
  return pivot_increments(profile, i)[theta_minus_i];
}

std::vector<double> informativeness_all(const StrategyProfile& profile) {
  double guilt = prior_guilt(profile);
  if (!(guilt > 0.0)) throw DomainError("informativeness undefined when Pr(guilt) = 0");
  auto guilty = detail::dense_prior(profile);
  guilty[0] = 0.0;
  detail::kernel_backward(profile, guilty);
  std::vector<double> out(guilty.size());
  for (Profile a = 0; a < out.size(); ++a) {
    out[a] = (guilty[a] / guilt) / report_profile_likelihood(profile, 0, a);
  }
  return out;
}

double informativeness(const StrategyProfile& profile, Profile a) {
  double guilt = prior_guilt(profile);
  if (!(guilt > 0.0)) throw DomainError("informativeness undefined when Pr(guilt) = 0");
  double num = 0.0;
  for (const auto& [theta, p] : profile.prior()) {
    if (theta != 0) num += p * report_profile_likelihood(profile, theta, a);
  }
  return (num / guilt) / report_profile_likelihood(profile, 0, a);
}

namespace {

double correlation_over(const std::vector<OffenseDistribution::Entry>& support, int n, int i,
                        int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("agent index out of range");
  double pj = 0.0, pij = 0.0, pi_notj = 0.0;
  for (const auto& [theta, p] : support) {
    bool ti = has_bit(theta, i), tj = has_bit(theta, j);
    if (tj) pj += p;
    if (ti && tj) pij += p;
    if (ti && !tj) pi_notj += p;
  }
  if (!(pj > 0.0 && pj < 1.0)) {
    throw DomainError("offense_correlation: Pr(theta_j = 1) must lie in (0,1)");
  }
  return pij / pj - pi_notj / (1.0 - pj);
}

}  // namespace

double offense_correlation(const OffenseDistribution& d, int i, int j) {
  return correlation_over(d.support(), d.n(), i, j);
}

double offense_correlation(const PrincipalStrategy& s, int i, int j) {
  return offense_correlation(s.opportunistic, i, j);
}

double offense_correlation(const StrategyProfile& profile, int i, int j) {
  return correlation_over(profile.prior(), profile.n(), i, j);
}

std::string to_string(JudgeDecision d) {
  switch (d) {
    case JudgeDecision::Acquit: return "acquit";
    case JudgeDecision::Indifferent: return "indifferent";
    case JudgeDecision::Convict: return "convict";
  }
  return "?";
}

std::string to_string(Interaction k) {
  switch (k) {
    case Interaction::Substitutes: return "substitutes";
    case Interaction::Complements: return "complements";
    case Interaction::Neutral: return "neutral";
  }
  return "?";
}

std::string to_string(Adjudication a) {
  return a == Adjudication::Aggregate ? "aggregate" : "distinct";
}

}  // namespace deterrence
