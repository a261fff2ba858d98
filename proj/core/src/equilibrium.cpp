#include "deterrence/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "deterrence/errors.hpp"
#include "deterrence/roots.hpp"
#include "deterrence/verification.hpp"

namespace deterrence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Shocks further than this many standard deviations below the mean have
// cdf below ~1e-300.
constexpr double kTailSigmas = 37.0;
constexpr double kDistinctRoot = 1e-6;

int scan_points(const SolverConfig& cfg) { return cfg.multistart_grid * kScanRefinement + 1; }

double tail_floor(const GameParams& p) {
  return p.shock.mean() - kTailSigmas * p.shock.std_dev();
}

double psi_gap(const GameParams& p, double hi, double lo) {
  return p.delta * p.shock.cdf_difference(hi, lo);
}

// Cutoff whose total accusation probability equals psi; NaN when unreachable.
double cutoff_for_psi(const GameParams& p, double psi) {
  double phi = (psi - (1.0 - p.delta) * p.alpha) / p.delta;
  if (!(phi > 0.0 && phi < 1.0)) return kNaN;
  return p.shock.quantile(phi);
}

struct Candidate {
  double omega_star = 0.0;
  double omega_star2 = 0.0;
  double q = 0.0;
  double pi = 0.0;
  int k = 1;
  double r = 0.0;
  double eq_residual = 0.0;
};

bool dedupe_close(const std::vector<Candidate>& seen, const Candidate& c) {
  for (const auto& s : seen) {
    if (s.k == c.k && std::abs(s.q - c.q) <= kDistinctRoot * std::max(1.0, s.q) &&
        std::abs(s.omega_star - c.omega_star) <= kDistinctRoot * std::max(1.0, std::abs(s.omega_star)) &&
        std::abs(s.r - c.r) <= kDistinctRoot) {
      return true;
    }
  }
  return false;
}

double max_informativeness(const StrategyProfile& profile) {
  auto all = informativeness_all(profile);
  return *std::max_element(all.begin(), all.end());
}

// Verify candidates, pick the one with smallest q (ties by residual), and
// record the rest.
EquilibriumProfile select(std::vector<EquilibriumProfile> verified, const SolverConfig& cfg,
                          const std::string& what, bool any_root) {
  if (verified.empty()) {
    if (any_root) {
      throw NonConvergence(what + ": fixed points found but none verified within tolerance");
    }
    throw NoEquilibrium(what + ": no admissible fixed point");
  }
  std::stable_sort(verified.begin(), verified.end(),
                   [](const EquilibriumProfile& a, const EquilibriumProfile& b) {
                     if (a.q != b.q) return a.q < b.q;
                     return a.residual < b.residual;
                   });
  (void)cfg;
  EquilibriumProfile best = verified.front();
  for (std::size_t j = 1; j < verified.size(); ++j) {
    const auto& v = verified[j];
    best.alternatives.push_back({v.q, v.omega_star(), v.omega_star2(), v.pi,
                                 v.kr ? v.kr->k : 1, v.kr ? v.kr->r : 0.0, v.residual});
  }
  return best;
}

// Fold best-response diagnostics into the residual; false if over tolerance.
bool finalize(EquilibriumProfile& eq, double eq_residual, const SolverConfig& cfg) {
  Diagnostics diag = best_response_residuals(eq.profile);
  eq.residual = std::max(eq_residual, diag.max_gap());
  return std::isfinite(eq.residual) && eq.residual <= 10.0 * cfg.tol;
}

// ---------------------------------------------------------------------------
// One offense at most: rule convicts only at n accusations.

struct OneOffenseState {
  double omega_star;
  double q;
  double I;
  double beta;
  double psi_s;
  double psi_s2;
  double residual;  // cutoff equation for omega**
};

OneOffenseState one_offense_state(const GameParams& p, double w2, int max_iter) {
  int n = p.n;
  double l = p.l_star();
  // c delta L (Phi(w1) - Phi(w2)) = b + c - w1 has a unique root above w2.
  auto inner = [&](double w1) { return p.c * p.L * psi_gap(p, w1, w2) - (p.b + p.c - w1); };
  double hi = p.b + p.c;
  OneOffenseState s{};
  s.omega_star = roots::solve_bracketed(inner, w2, hi, max_iter);
  s.psi_s2 = p.psi(w2);
  s.psi_s = p.psi(s.omega_star);
  s.I = s.psi_s / s.psi_s2;
  double q1 = std::pow(s.psi_s2, n - 1);
  s.q = p.c / ((p.b + p.c - s.omega_star) * q1);
  s.beta = n * s.I / (n * s.I + (n - 1) * l);
  double q0 = n == 1 ? 1.0
                     : s.beta * q1 + (1.0 - s.beta) * s.psi_s * std::pow(s.psi_s2, n - 2);
  s.residual = w2 - p.c + p.c / (s.q * q0);
  return s;
}

EquilibriumProfile build_one_offense(const GameParams& p, const OneOffenseState& s, double w2,
                                     Regime regime) {
  int n = p.n;
  double pi = p.l_star() / (s.I + p.l_star());
  double r = 1.0 - pi / p.pi_o;
  std::vector<double> qm(n + 1, 0.0);
  qm[n] = s.q;
  auto principal = PrincipalStrategy::symmetric(n, 1, std::clamp(r, 0.0, 1.0));
  auto profile = StrategyProfile::symmetric(p, principal, {s.omega_star, w2},
                                            ConvictionRule::symmetric(qm), Adjudication::Aggregate);
  EquilibriumProfile eq(regime, profile);
  eq.q = s.q;
  eq.pi = pi;
  eq.informativeness_max = s.I;
  if (n >= 2) eq.beta = s.beta;
  eq.l_star = p.l_star();
  eq.kr = principal.kr;
  return eq;
}

double one_offense_eq_residual(const GameParams& p, const EquilibriumProfile& eq) {
  const auto& profile = eq.profile;
  int n = p.n;
  double w1 = eq.omega_star();
  double psi2 = profile.accusation_prob(0, false);
  double gap = profile.accusation_gap(0);
  double indiff = std::abs(p.L * eq.q * std::pow(psi2, n - 1) * gap - 1.0);
  double cut1 = std::abs(w1 - (p.b + p.c - p.c / (eq.q * std::pow(psi2, n - 1))));
  double post = posterior_aggregate(profile, full_profile(n));
  return std::max({indiff, cut1, std::abs(post - p.pi_star)});
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SingleAgent: return "single";
    case Regime::AppOneType: return "app";
    case Regime::AppTwoType: return "app-two-type";
    case Regime::AppComplements: return "app-complements";
    case Regime::DppLinear: return "dpp";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "single") return Regime::SingleAgent;
  if (s == "app") return Regime::AppOneType;
  if (s == "app-two-type") return Regime::AppTwoType;
  if (s == "app-complements") return Regime::AppComplements;
  if (s == "dpp") return Regime::DppLinear;
  throw DomainError("unknown regime '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tol must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
  if (multistart_grid < 1) throw DomainError("multistart must be >= 1");
}

namespace detail {

EquilibriumProfile solve_one_offense_general(const GameParams& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  double lo = std::min(tail_floor(p), -p.b - 1.0);
  auto grid = roots::linspace(lo, 0.0, scan_points(cfg));
  grid.pop_back();  // omega** = 0 means q = 1
  auto outer = [&](double w2) { return one_offense_state(p, w2, cfg.max_iter).residual; };
  auto found = roots::all_roots(outer, grid, cfg.max_iter);

  Regime regime = p.n == 1 ? Regime::SingleAgent : Regime::AppOneType;
  std::vector<EquilibriumProfile> verified;
  bool any_root = false;
  for (double w2 : found) {
    auto s = one_offense_state(p, w2, cfg.max_iter);
    if (!(s.q > 0.0 && s.q < 1.0)) continue;
    double pi = p.l_star() / (s.I + p.l_star());
    if (!(pi > 0.0 && pi <= p.pi_o)) continue;
    any_root = true;
    auto eq = build_one_offense(p, s, w2, regime);
    double res = std::max(one_offense_eq_residual(p, eq), std::abs(s.residual));
    if (finalize(eq, res, cfg)) verified.push_back(std::move(eq));
  }
  return select(std::move(verified), cfg, to_string(regime), any_root);
}

}  // namespace detail

EquilibriumProfile solve_single_agent(const GameParams& params, const SolverConfig& cfg) {
  if (params.n != 1) throw DomainError("solve_single_agent requires n = 1");
  return detail::solve_one_offense_general(params, cfg);
}

EquilibriumProfile solve_app_one_type(const GameParams& params, const SolverConfig& cfg) {
  params.validate();
  if (params.pi_o < params.pi_star) {
    throw DomainError("solve_app_one_type requires pi_o >= pi_star");
  }
  if (params.n == 1) return solve_single_agent(params, cfg);
  return detail::solve_one_offense_general(params, cfg);
}

// ---------------------------------------------------------------------------
// Two principal types: opportunistic (k, r) strategy, conviction only at n
// accusations.

namespace {

struct KrWeights {
  double q1;
  double q0;
};

KrWeights kr_weights(const GameParams& p, int k, double r, double ps, double ps2) {
  int n = p.n;
  auto pw = [](double x, int e) { return e < 0 ? 0.0 : std::pow(x, e); };
  double q1 = ((1.0 - r) * k * pw(ps, k - 1) * pw(ps2, n - k) +
               (k >= 2 ? r * (k - 1) * pw(ps, k - 2) * pw(ps2, n - k + 1) : 0.0)) /
              (k - r);
  double vo = 1.0 - p.pi_o;
  double wk = p.pi_o * (1.0 - r) * (n - k) / n;
  double wk1 = p.pi_o * r * (n - k + 1) / n;
  double num = vo * pw(ps2, n - 1) + (n > k ? wk * pw(ps, k) * pw(ps2, n - 1 - k) : 0.0) +
               wk1 * pw(ps, k - 1) * pw(ps2, n - k);
  double den = vo + wk + wk1;
  return {q1, num / den};
}

struct KrState {
  bool valid = false;
  double omega_star = kNaN;
  double q = kNaN;
  double r = kNaN;
  double res1 = kNaN;  // omega* equation
  double res2 = kNaN;  // omega** equation
};

// Interior r: given omega** and I, indifference pins q and the posterior
// condition pins r.
KrState kr_interior_state(const GameParams& p, int k, double w2, double I) {
  KrState s;
  double l2 = p.l_star_two_type();
  double ps2 = p.psi(w2);
  double ps = I * ps2;
  double w1 = cutoff_for_psi(p, ps);
  if (std::isnan(w1)) return s;
  double r = (I - l2 / std::pow(I, k - 1)) / (I - 1.0);
  double gap = psi_gap(p, w1, w2);
  double q = 1.0 / (p.L * std::pow(ps, k - 1) * std::pow(ps2, p.n - k) * gap);
  auto wts = kr_weights(p, k, r, ps, ps2);
  s.valid = true;
  s.omega_star = w1;
  s.q = q;
  s.r = r;
  s.res1 = w1 - (p.b + p.c - p.c / (q * wts.q1));
  s.res2 = w2 - (p.c - p.c / (q * wts.q0));
  return s;
}

// Pure k (r = 0): I fixed by the posterior condition, q by the omega* equation.
KrState kr_pure_state(const GameParams& p, int k, double w2) {
  KrState s;
  double I = std::pow(p.l_star_two_type(), 1.0 / k);
  double ps2 = p.psi(w2);
  double ps = I * ps2;
  double w1 = cutoff_for_psi(p, ps);
  if (std::isnan(w1) || !(w1 < p.b + p.c)) return s;
  auto wts = kr_weights(p, k, 0.0, ps, ps2);
  double q = p.c / ((p.b + p.c - w1) * wts.q1);
  s.valid = true;
  s.omega_star = w1;
  s.q = q;
  s.r = 0.0;
  s.res1 = 0.0;
  s.res2 = w2 - (p.c - p.c / (q * wts.q0));
  return s;
}

EquilibriumProfile build_kr(const GameParams& p, int k, double r, double w1, double w2,
                            double q) {
  int n = p.n;
  std::vector<double> qm(n + 1, 0.0);
  qm[n] = q;
  auto principal = PrincipalStrategy::symmetric(n, k, r);
  auto profile = StrategyProfile::symmetric(p, principal, {w1, w2},
                                            ConvictionRule::symmetric(qm), Adjudication::Aggregate);
  EquilibriumProfile eq(Regime::AppTwoType, profile);
  eq.q = q;
  eq.pi = prior_guilt(profile);
  eq.informativeness_max = max_informativeness(profile);
  eq.l_star = p.l_star();
  eq.kr = principal.kr;
  return eq;
}

double kr_eq_residual(const GameParams& p, const EquilibriumProfile& eq, bool interior) {
  const auto& profile = eq.profile;
  int n = p.n;
  int k = eq.kr->k;
  double ps = profile.accusation_prob(0, true);
  double ps2 = profile.accusation_prob(0, false);
  auto wts = kr_weights(p, k, eq.kr->r, ps, ps2);
  double r1 = std::abs(eq.omega_star() - (p.b + p.c - p.c / (eq.q * wts.q1)));
  double r2 = std::abs(eq.omega_star2() - (p.c - p.c / (eq.q * wts.q0)));
  double post = std::abs(posterior_aggregate(profile, full_profile(n)) - p.pi_star);
  double gap = profile.accusation_gap(0);
  double base = p.L * eq.q * std::pow(ps2, n - 1) * gap;  // L q Psi**^n (I-1)
  double I = ps / ps2;
  double indiff = 0.0;
  if (interior) {
    indiff = std::abs(base * std::pow(I, k - 1) - 1.0);
  } else {
    double dk = base * std::pow(I, k - 1);
    indiff = std::max(0.0, dk - 1.0);
    if (k < n) indiff = std::max(indiff, 1.0 - dk * I);
  }
  return std::max({r1, r2, post, indiff});
}

}  // namespace

EquilibriumProfile solve_app_two_type(const GameParams& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  if (p.n < 2) throw DomainError("solve_app_two_type requires n >= 2");
  if (!(p.pi_o < p.pi_star)) throw DomainError("solve_app_two_type requires pi_o < pi_star");

  std::vector<EquilibriumProfile> verified;
  bool any_root = false;
  double l2 = p.l_star_two_type();
  double lo = std::min(tail_floor(p), -p.b - 1.0);
  auto outer_grid = roots::linspace(lo, 0.0, scan_points(cfg));
  outer_grid.pop_back();

  auto accept = [&](EquilibriumProfile eq, double res) {
    any_root = true;
    if (finalize(eq, res, cfg)) verified.push_back(std::move(eq));
  };

  // k = 1 with interior r shares the one-offense structure.
  try {
    auto eq = detail::solve_one_offense_general(p, cfg);
    eq.regime = Regime::AppTwoType;
    accept(eq, eq.residual);
  } catch (const NoEquilibrium&) {
  } catch (const NonConvergence&) {
    any_root = true;
  }

  // Interior r for k >= 2: inner unknown I over the r in [0,1] window.
  for (int k = 2; k <= p.n; ++k) {
    double I_lo = std::pow(l2, 1.0 / k);
    double I_hi = std::pow(l2, 1.0 / (k - 1));
    auto inner_grid = roots::linspace(I_lo, I_hi, scan_points(cfg));
    for (int branch = 0; branch < 2; ++branch) {
      auto inner_root = [&](double w2) -> double {
        auto f = [&](double I) {
          auto s = kr_interior_state(p, k, w2, I);
          return s.valid ? s.res1 : kNaN;
        };
        auto rts = roots::all_roots(f, inner_grid, cfg.max_iter);
        if (rts.empty()) return kNaN;
        return branch == 0 ? rts.front() : rts.back();
      };
      auto outer = [&](double w2) {
        double I = inner_root(w2);
        if (std::isnan(I)) return kNaN;
        return kr_interior_state(p, k, w2, I).res2;
      };
      for (double w2 : roots::all_roots(outer, outer_grid, cfg.max_iter)) {
        double I = inner_root(w2);
        if (std::isnan(I)) continue;
        auto s = kr_interior_state(p, k, w2, I);
        if (!s.valid || !(s.q > 0.0 && s.q < 1.0) || !(s.r >= 0.0 && s.r <= 1.0)) continue;
        auto eq = build_kr(p, k, s.r, s.omega_star, w2, s.q);
        accept(eq, kr_eq_residual(p, eq, true));
      }
    }
  }

  // Pure k: inequality version of the indifference condition.
  for (int k = 1; k <= p.n; ++k) {
    auto outer = [&](double w2) {
      auto s = kr_pure_state(p, k, w2);
      return s.valid ? s.res2 : kNaN;
    };
    for (double w2 : roots::all_roots(outer, outer_grid, cfg.max_iter)) {
      auto s = kr_pure_state(p, k, w2);
      if (!s.valid || !(s.q > 0.0 && s.q < 1.0)) continue;
      auto eq = build_kr(p, k, 0.0, s.omega_star, w2, s.q);
      double res = kr_eq_residual(p, eq, false);
      if (res > 10.0 * cfg.tol) continue;  // inequalities fail: not an equilibrium
      accept(eq, res);
    }
  }

  // Drop duplicates (the same fixed point reached from several branches).
  std::vector<EquilibriumProfile> unique;
  std::vector<Candidate> seen;
  for (auto& eq : verified) {
    Candidate c{eq.omega_star(), eq.omega_star2(), eq.q, eq.pi, eq.kr ? eq.kr->k : 1,
                eq.kr ? eq.kr->r : 0.0, eq.residual};
    if (dedupe_close(seen, c)) continue;
    seen.push_back(c);
    unique.push_back(std::move(eq));
  }
  return select(std::move(unique), cfg, "app-two-type", any_root);
}

// ---------------------------------------------------------------------------
// Complements regime, n = 2.

namespace {

// (Psi - 1) c (1-q) / (q + Psi (1 - 2q)) shifted by the witnessed payoff.
double complements_cutoff(const GameParams& p, double q, double shift, int max_iter) {
  auto h = [&](double w) {
    double psi = p.psi(w);
    return w - shift + p.c * (1.0 - q) * (1.0 - psi) / (q + psi * (1.0 - 2.0 * q));
  };
  if (q >= 1.0) return shift;
  double lo = shift - p.c * (1.0 - q) / q - 1.0;
  return roots::solve_bracketed(h, lo, shift, max_iter);
}

struct ComplementsState {
  double omega_star;
  double omega_star2;
  double L;
};

ComplementsState complements_state(const GameParams& p, double q, int max_iter) {
  ComplementsState s{};
  s.omega_star = complements_cutoff(p, q, p.b, max_iter);
  s.omega_star2 = complements_cutoff(p, q, 0.0, max_iter);
  double ps = p.psi(s.omega_star);
  double ps2 = p.psi(s.omega_star2);
  double gap = psi_gap(p, s.omega_star, s.omega_star2);
  s.L = 2.0 / (gap * ((1.0 - 2.0 * q) * (ps + ps2) + 2.0 * q));
  return s;
}

EquilibriumProfile build_complements(const GameParams& params, double q,
                                     const ComplementsState& s, const SolverConfig& cfg) {
  GameParams p = params;
  p.L = s.L;
  double ps = p.psi(s.omega_star);
  double ps2 = p.psi(s.omega_star2);
  double I = ps * (1.0 - ps) / (ps2 * (1.0 - ps2));
  double pi = p.l_star() / (I + p.l_star());
  if (!(pi > 0.0 && pi <= p.pi_o)) {
    throw NoEquilibrium("app-complements: implied offense probability exceeds pi_o");
  }
  double top = pi / p.pi_o;
  auto principal = PrincipalStrategy::from(OffenseDistribution(2, {{0b00, 1.0 - top}, {0b11, top}}));
  auto rule = ConvictionRule::table(2, {0.0, q, q, 1.0});
  auto profile = StrategyProfile::symmetric(p, principal, {s.omega_star, s.omega_star2}, rule,
                                            Adjudication::Aggregate);
  EquilibriumProfile eq(Regime::AppComplements, profile);
  eq.q = q;
  eq.pi = pi;
  eq.informativeness_max = max_informativeness(profile);
  eq.l_star = p.l_star();
  eq.L_value = s.L;
  double post = posterior_aggregate(profile, 0b01);
  double res = std::abs(post - p.pi_star);
  if (!finalize(eq, res, cfg)) {
    std::ostringstream os;
    os << "app-complements: residual " << eq.residual << " above tolerance";
    throw NonConvergence(os.str());
  }
  return eq;
}

void require_complements_params(const GameParams& p) {
  p.validate();
  if (p.n != 2) throw DomainError("complements regime requires n = 2");
  if (p.pi_o < p.pi_star) throw DomainError("complements regime requires pi_o >= pi_star");
}

}  // namespace

EquilibriumProfile solve_app_complements(const GameParams& params, double q_target,
                                         const SolverConfig& cfg) {
  require_complements_params(params);
  cfg.validate();
  if (!(q_target > 0.5 && q_target <= 1.0)) {
    throw DomainError("q_target must lie in (1/2, 1]");
  }
  auto s = complements_state(params, q_target, cfg.max_iter);
  return build_complements(params, q_target, s, cfg);
}

LInterval complements_L_interval(const GameParams& params, const SolverConfig& cfg) {
  require_complements_params(params);
  cfg.validate();
  auto grid = roots::linspace(0.5, 1.0, scan_points(cfg));
  LInterval out{std::numeric_limits<double>::infinity(), 0.0, kNaN, kNaN};
  for (double q : grid) {
    double L = complements_state(params, q, cfg.max_iter).L;
    if (!std::isfinite(L)) continue;
    if (L < out.L_low) {
      out.L_low = L;
      out.q_at_low = q;
    }
    if (L > out.L_high) {
      out.L_high = L;
      out.q_at_high = q;
    }
  }
  if (!(out.L_low <= out.L_high)) throw NonConvergence("complements: no finite L on the q grid");
  return out;
}

EquilibriumProfile solve_app_complements_at_L(const GameParams& params,
                                              const SolverConfig& cfg) {
  require_complements_params(params);
  cfg.validate();
  auto grid = roots::linspace(0.5, 1.0, scan_points(cfg));
  grid.front() = 0.5 + 1e-12;
  // Solve in log L: the map spans many orders of magnitude near q = 1/2.
  auto f = [&](double q) {
    return std::log(complements_state(params, q, cfg.max_iter).L) - std::log(params.L);
  };
  std::vector<EquilibriumProfile> verified;
  bool any_root = false;
  for (double q : roots::all_roots(f, grid, cfg.max_iter)) {
    if (!(q > 0.5 && q <= 1.0)) continue;
    any_root = true;
    try {
      auto s = complements_state(params, q, cfg.max_iter);
      auto eq = build_complements(params, q, s, cfg);
      // Report the equilibrium at the requested L; the located q reproduces it.
      double rel = std::abs(s.L - params.L) / params.L;
      eq.residual = std::max(eq.residual, rel);
      if (eq.residual <= 10.0 * cfg.tol) verified.push_back(std::move(eq));
    } catch (const NoEquilibrium&) {
    } catch (const NonConvergence&) {
    }
  }
  return select(std::move(verified), cfg, "app-complements", any_root);
}

// ---------------------------------------------------------------------------
// Distinct adjudication: linear rule, product principal strategy.

namespace {

struct DppState {
  double omega_star2;
  double q_step;
  double r;
  double I;
  double residual;
};

DppState dpp_state(const GameParams& p, double w1) {
  DppState s{};
  s.omega_star2 = w1 - p.b;
  double ps = p.psi(w1);
  double ps2 = p.psi(s.omega_star2);
  s.I = ps / ps2;
  double l = p.l_star();
  s.r = l / (s.I + l);
  double gap = psi_gap(p, w1, s.omega_star2);
  s.q_step = 1.0 / (p.L * gap);
  double mean_psi = s.r * ps + (1.0 - s.r) * ps2;
  s.residual = w1 - (p.b + p.c + p.c * (p.n - 1) * mean_psi) + p.c * p.L * gap;
  return s;
}

}  // namespace

EquilibriumProfile solve_dpp(const GameParams& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  if (p.pi_o != 1.0) throw DomainError("solve_dpp supports pi_o = 1 only");
  double lo = std::min(tail_floor(p) + p.b, -1.0);
  auto grid = roots::linspace(lo, p.b, scan_points(cfg));
  auto f = [&](double w1) { return dpp_state(p, w1).residual; };
  std::vector<EquilibriumProfile> verified;
  bool any_root = false;
  int n = p.n;
  for (double w1 : roots::all_roots(f, grid, cfg.max_iter)) {
    auto s = dpp_state(p, w1);
    if (!(s.q_step > 0.0 && s.q_step * n < 1.0)) continue;
    if (!(s.r > 0.0 && s.r < 1.0)) continue;
    any_root = true;
    std::vector<double> marg(n, s.r);
    auto principal = PrincipalStrategy::from(OffenseDistribution::independent(marg));
    auto profile = StrategyProfile::symmetric(p, principal, {w1, s.omega_star2},
                                              ConvictionRule::linear(n, s.q_step),
                                              Adjudication::Distinct);
    EquilibriumProfile eq(Regime::DppLinear, profile);
    eq.q = s.q_step;
    eq.pi = 1.0 - std::pow(1.0 - s.r, n);
    eq.informativeness_max = s.I;
    eq.l_star = p.l_star();
    double ps = profile.accusation_prob(0, true);
    double ps2 = profile.accusation_prob(0, false);
    double post = s.r * ps / (s.r * ps + (1.0 - s.r) * ps2);
    double indiff = std::abs(p.L * s.q_step * profile.accusation_gap(0) - 1.0);
    double res = std::max({std::abs(s.residual), std::abs(post - p.pi_star), indiff});
    if (finalize(eq, res, cfg)) verified.push_back(std::move(eq));
  }
  return select(std::move(verified), cfg, "dpp", any_root);
}

EquilibriumProfile solve_app(const GameParams& params, const SolverConfig& cfg) {
  params.validate();
  if (params.n == 1) return solve_single_agent(params, cfg);
  if (params.pi_o < params.pi_star) return solve_app_two_type(params, cfg);
  try {
    return solve_app_one_type(params, cfg);
  } catch (const NoEquilibrium&) {
    if (params.n != 2) throw;
  }
  return solve_app_complements_at_L(params, cfg);
}

}  // namespace deterrence
