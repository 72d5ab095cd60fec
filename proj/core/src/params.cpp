#include "heraldmis/params.hpp"

#include <cmath>
#include <stdexcept>

#include "heraldmis/log.hpp"

namespace heraldmis {

namespace {

double log2_floor1(long n) { return std::max(1.0, std::log2(static_cast<double>(n))); }

}  // namespace

ProtocolParams derive_params(long n, int freq, int alpha, const ParamOverrides& o) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (freq < 1) throw std::invalid_argument("F >= 1 required");
  if (alpha < 1) throw std::invalid_argument("alpha >= 1 required");

  ProtocolParams p;
  p.n_known = o.n_known.value_or(n);
  p.alpha = alpha;
  p.freq = freq;

  const double ln = log2_floor1(p.n_known);

  p.n_report = o.n_report.value_or(3 * alpha * alpha);
  p.n_herald = o.n_herald.value_or(
      std::max(1, static_cast<int>(std::ceil(std::log2(std::max(2.0, ln))))));
  p.n_decay = o.n_decay.value_or(std::max(1, freq - p.n_report - p.n_herald - 2));

  p.pi_listen = o.pi_listen.value_or(0.1);
  p.m_bar = o.m_bar.value_or(1);
  p.sigma_plus = o.sigma_plus.value_or(std::pow(2.0, 1.0 / 16.0));
  p.sigma_minus = o.sigma_minus.value_or(
      std::pow(p.sigma_plus, 20.0 * static_cast<double>(p.m_bar)));
  p.gamma_min = o.gamma_min.value_or(std::min(0.5, std::pow(ln, -3.0)));
  p.rbg_decay_exp = o.rbg_decay_exp.value_or(20);

  const double c_wait = o.c_wait.value_or(2.0);
  const double c_decay = o.c_decay.value_or(1.0);
  const double c_lonely = o.c_lonely.value_or(130.0);
  const double c_red_blue = o.c_red_blue.value_or(8.0);
  const long tau_lonely_min = o.tau_lonely_min.value_or(1600);
  const long min_games = o.min_red_blue_games.value_or(8);

  p.tau_wait = o.tau_wait.value_or(static_cast<long>(std::ceil(c_wait * ln)));
  p.tau_decay = o.tau_decay.value_or(
      std::max<long>(1, static_cast<long>(std::ceil(c_decay * ln / freq))));
  p.tau_lonely = o.tau_lonely.value_or(
      std::max(tau_lonely_min,
               static_cast<long>(std::ceil(c_lonely * (ln * ln / freq + ln)))));
  if (o.tau_red_blue) {
    p.tau_red_blue = *o.tau_red_blue;
  } else {
    const long games = std::max<long>(
        min_games, static_cast<long>(std::ceil(c_red_blue * ln / 8.0)));
    p.tau_red_blue = 8 * games;
  }

  const double budget_mult = o.budget_multiplier.value_or(2.0 * alpha * alpha);
  p.runtime_budget = static_cast<long>(std::ceil(budget_mult * static_cast<double>(p.tau_lonely)));

  p.lonely_in_all_states = o.lonely_in_all_states.value_or(false);
  p.phase_cap = std::max(0, static_cast<int>(std::floor(std::log2(static_cast<double>(p.n_known)))) - 2);

  p.delta_probe = alpha >= 2 ? std::log2(ln) / (2.0 * std::log2(static_cast<double>(alpha))) : 0.0;
  p.eta_probe = std::pow(static_cast<double>(alpha), -8.0);
  p.gamma_low = std::sqrt(p.gamma_min);
  p.degree_cap = static_cast<long>(std::ceil(std::pow(ln, 4.0)));

  // Validation.
  if (p.tau_red_blue % 8 != 0) throw std::invalid_argument("tau_red_blue must be a multiple of 8");
  if (p.n_report < 3 * alpha * alpha) {
    throw std::invalid_argument("n_report >= 3*alpha^2 required");
  }
  if (!(p.pi_listen > 0.0 && p.pi_listen <= 0.1)) {
    throw std::invalid_argument("pi_listen must lie in (0, 1/10]");
  }
  if (!(p.gamma_min > 0.0 && p.gamma_min <= 0.5)) {
    throw std::invalid_argument("gamma_min must lie in (0, 1/2]");
  }
  if (p.sigma_plus <= 1.0 || p.sigma_minus <= 1.0) {
    throw std::invalid_argument("sigma factors must exceed 1");
  }

  if (p.total_channels() > freq) {
    log_warn("channel plan uses %d channels, exceeding F=%d (runs proceed regardless)",
             p.total_channels(), freq);
  }

  // Record divergences from the published constants.
  const double paper_gamma_min = std::pow(ln, -24.0);
  if (std::abs(p.gamma_min - paper_gamma_min) > 1e-15) {
    p.divergences.push_back("gamma_min=" + std::to_string(p.gamma_min) +
                            " (paper: log^-24 n)");
  }
  const long paper_m_bar = (1l << 16) * p.n_report;
  if (p.m_bar != paper_m_bar) {
    p.divergences.push_back("m_bar=" + std::to_string(p.m_bar) +
                            " (paper: 2^16 * n_report)");
  }
  const double paper_sigma_plus = std::pow(2.0, 6.0 / (1000.0 * static_cast<double>(p.m_bar)));
  if (std::abs(p.sigma_plus - paper_sigma_plus) > 1e-12) {
    p.divergences.push_back("sigma_plus=" + std::to_string(p.sigma_plus) +
                            " (paper: 2^{6/(1000 m_bar)})");
  }
  return p;
}

ParamOverrides paper_scale_overrides(long n, int alpha) {
  ParamOverrides o;
  const double ln = log2_floor1(n);
  const long n_report = 3l * alpha * alpha;
  o.m_bar = (1l << 16) * n_report;
  o.sigma_plus = std::pow(2.0, 6.0 / (1000.0 * static_cast<double>(*o.m_bar)));
  // sigma_minus = sigma_plus^{20 m_bar} = 2^{12/100}, independent of m_bar.
  o.gamma_min = std::pow(ln, -24.0);
  return o;
}

}  // namespace heraldmis
