#pragma once

#include <optional>
#include <string>
#include <vector>

namespace heraldmis {

/// Every tunable constant of the protocol, plus the analysis probes the
/// verifier consumes (delta, eta, gamma_low, degree cap).
struct ProtocolParams {
  long n_known = 1;  // n or a polynomial upper bound, known to all nodes
  int alpha = 1;     // alpha(2), assumed known to all nodes
  int freq = 1;      // channel budget F

  // Channel counts. Report/Decay/Herald classes are indexed 1..n_X; the
  // handshake and game channels are singletons.
  int n_report = 3;
  int n_decay = 1;
  int n_herald = 1;

  double pi_listen = 0.1;      // herald-protocol listen probability, <= 1/10
  double sigma_plus = 0.0;     // per-round activity growth factor, > 1
  double sigma_minus = 0.0;    // activity reduction factor, > 1
  double gamma_min = 0.0;      // entry and floor activity
  int rbg_decay_exp = 20;      // exponent in the red-blue-game activity decay
  long m_bar = 1;

  long tau_wait = 1;       // rounds spent listening in W
  long tau_decay = 1;      // rounds per decay phase
  long tau_lonely = 1;     // silence threshold for self-promotion to M
  long tau_red_blue = 8;   // rounds in the red-blue protocol, multiple of 8
  long runtime_budget = 1; // harness-facing decision budget per node

  // A literal reading of the core loop increments `lonely` in every state;
  // the default restricts it to the herald filter.
  bool lonely_in_all_states = false;

  int phase_cap = 0;  // decay phase ceiling, floor(log2 n) - 2

  // Analysis probes (no algorithmic role).
  double delta_probe = 0.0;   // log log n / (2 log alpha)
  double eta_probe = 0.0;     // alpha^-8
  double gamma_low = 0.0;     // sqrt(gamma_min)
  long degree_cap = 1;        // ceil(log2^4 n), herald-filter degree probe

  // Where the effective constants diverge from the paper-scale formulas.
  std::vector<std::string> divergences;

  int total_channels() const { return n_report + n_decay + n_herald + 2; }
};

/// Optional overrides for derive_params. Unset fields take desk-scale
/// defaults.
struct ParamOverrides {
  std::optional<long> n_known;
  std::optional<int> n_report, n_decay, n_herald;
  std::optional<double> pi_listen, sigma_plus, sigma_minus, gamma_min;
  std::optional<int> rbg_decay_exp;
  std::optional<long> m_bar;
  std::optional<long> tau_wait, tau_decay, tau_lonely, tau_red_blue;
  std::optional<double> c_wait, c_decay, c_lonely, c_red_blue;
  std::optional<long> tau_lonely_min;
  std::optional<long> min_red_blue_games;
  std::optional<double> budget_multiplier;
  std::optional<bool> lonely_in_all_states;
};

/// Fills every protocol constant from (n, F, alpha) and the overrides.
/// Warns (without failing) when the derived channel set exceeds F.
ProtocolParams derive_params(long n, int freq, int alpha, const ParamOverrides& o = {});

/// The published large-n constants, expressed as overrides. Degenerate at
/// desk scale but available for comparison runs.
ParamOverrides paper_scale_overrides(long n, int alpha);

}  // namespace heraldmis
