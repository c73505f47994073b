#pragma once

/// Noisy, discounted iterated price war between six strategies.
///
/// Discounting plays the defect role: both discount -> (b, b), A alone
/// discounts -> (d, a), neither -> (c, c).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axia/ec_space.hpp"
#include "axia/rng.hpp"

namespace axia::games {

enum class Action { cooperate, defect };

inline Action flip(Action a) noexcept { return a == Action::cooperate ? Action::defect : Action::cooperate; }

enum class StrategyId { always_defect, always_cooperate, tit_for_tat, generous_tft, mixed, consequence };
inline constexpr std::array<StrategyId, 6> kStrategies{StrategyId::always_defect, StrategyId::always_cooperate,
                                                       StrategyId::tit_for_tat,   StrategyId::generous_tft,
                                                       StrategyId::mixed,         StrategyId::consequence};

inline constexpr double kForgiveProbability = 0.3;
inline constexpr double kMixedDefectProbability = 0.5;

inline std::string_view strategy_name(StrategyId s) {
  switch (s) {
    case StrategyId::always_defect: return "always_defect";
    case StrategyId::always_cooperate: return "always_cooperate";
    case StrategyId::tit_for_tat: return "tit_for_tat";
    case StrategyId::generous_tft: return "generous_tft";
    case StrategyId::mixed: return "mixed";
    case StrategyId::consequence: return "consequence";
  }
  return "";
}

struct Payoffs {
  double a = 2, b = 4, c = 5, d = 6;
};

struct GameConfig {
  std::size_t rounds = 2;
  Payoffs payoffs;
  double delta = 0.5;
  double epsilon = 0.0;
};

/// Row player's payoff.
inline double payoff(const Payoffs& p, Action own, Action other) noexcept {
  if (own == Action::defect) return other == Action::defect ? p.b : p.d;
  return other == Action::defect ? p.a : p.c;
}

/// Per-match player state. The strategy's private randomness comes from a
/// stream keyed by the strategy alone, so self-play is symmetric.
class Player {
 public:
  explicit Player(StrategyId id)
      : id_(id), rng_(derive_seed(0x5EED, "games.strategy", {static_cast<std::uint64_t>(id)})) {}

  StrategyId id() const noexcept { return id_; }

  Action decide() {
    switch (id_) {
      case StrategyId::always_defect: return Action::defect;
      case StrategyId::always_cooperate: return Action::cooperate;
      case StrategyId::tit_for_tat: return seen_.empty() ? Action::cooperate : seen_.back();
      case StrategyId::generous_tft:
        if (seen_.empty() || seen_.back() == Action::cooperate) return Action::cooperate;
        return rng_.bernoulli(kForgiveProbability) ? Action::cooperate : Action::defect;
      case StrategyId::mixed: return rng_.bernoulli(kMixedDefectProbability) ? Action::defect : Action::cooperate;
      case StrategyId::consequence: {
        const std::size_t n = seen_.size();
        const bool punish = n >= 2 && seen_[n - 1] == Action::defect && seen_[n - 2] == Action::defect;
        return punish ? Action::defect : Action::cooperate;
      }
    }
    return Action::cooperate;
  }

  void observe(Action opponent_executed) { seen_.push_back(opponent_executed); }

 private:
  StrategyId id_;
  Rng rng_;
  std::vector<Action> seen_;
};

/// Discounted earnings sum_{i=1..n} delta^(i-1) v(i) of both players. Each
/// executed action flips the intended one with probability epsilon; both
/// players' noise is drawn every round.
inline std::pair<double, double> play_match(StrategyId sa, StrategyId sb, const GameConfig& cfg, std::uint64_t seed) {
  Player pa(sa), pb(sb);
  Rng noise(seed);
  double ua = 0.0, ub = 0.0, weight = 1.0;
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    Action xa = pa.decide(), xb = pb.decide();
    const bool fa = noise.bernoulli(cfg.epsilon);
    const bool fb = noise.bernoulli(cfg.epsilon);
    if (fa) xa = flip(xa);
    if (fb) xb = flip(xb);
    ua += weight * payoff(cfg.payoffs, xa, xb);
    ub += weight * payoff(cfg.payoffs, xb, xa);
    pa.observe(xb);
    pb.observe(xa);
    weight *= cfg.delta;
  }
  return {ua, ub};
}

struct TournamentScores {
  double total_earning = 0.0;
  double net_earning = 0.0;
};

inline std::uint64_t match_seed(std::uint64_t seed, StrategyId object, StrategyId opponent) {
  return derive_seed(seed, "games.match", {static_cast<std::uint64_t>(object), static_cast<std::uint64_t>(opponent)});
}

/// One match of `object` (side A) against each strategy; with
/// `include_self = false` the self-pairing is skipped.
inline TournamentScores tournament_scores(StrategyId object, const GameConfig& cfg, std::uint64_t seed,
                                          bool include_self = true) {
  double own = 0.0, opp = 0.0;
  std::size_t matches = 0;
  for (StrategyId other : kStrategies) {
    if (!include_self && other == object) continue;
    const auto [ua, ub] = play_match(object, other, cfg, match_seed(seed, object, other));
    own += ua;
    opp += ub;
    ++matches;
  }
  TournamentScores s;
  s.total_earning = own / static_cast<double>(matches);
  s.net_earning = s.total_earning - opp / static_cast<double>(matches);
  return s;
}

/// Mean of tournament_scores over a set of configurations.
inline TournamentScores tournament_scores(StrategyId object, std::span<const GameConfig> cfgs, std::uint64_t seed) {
  if (cfgs.empty()) throw std::invalid_argument("no configurations");
  TournamentScores s;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const auto t = tournament_scores(object, cfgs[i], derive_seed(seed, "games.config", {i}));
    s.total_earning += t.total_earning;
    s.net_earning += t.net_earning;
  }
  s.total_earning /= static_cast<double>(cfgs.size());
  s.net_earning /= static_cast<double>(cfgs.size());
  return s;
}

// ---------------------------------------------------------------------------
// EC space

inline constexpr std::array<std::size_t, 4> kRounds{2, 5, 10, 100};
inline constexpr std::array<Payoffs, 10> kPayoffs{{{2, 4, 5, 6},
                                                   {1, 4, 5, 6},
                                                   {2, 4, 6, 7},
                                                   {1, 4, 6, 7},
                                                   {2, 3, 5, 7},
                                                   {1, 3, 5, 7},
                                                   {2, 3, 6, 7},
                                                   {1, 3, 6, 7},
                                                   {2, 5, 6, 7},
                                                   {1, 5, 6, 7}}};
inline constexpr std::array<double, 9> kDeltas{0.5, 0.58, 0.66, 0.74, 0.82, 0.9, 0.95, 0.975, 0.99};
inline constexpr std::array<double, 12> kEpsilons{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 1.0};

inline EcSpace make_space() {
  Factor n{"n", {}, "rounds"};
  for (auto v : kRounds) n.values.push_back(std::to_string(v));
  Factor abcd{"abcd", {}, ""};
  for (const auto& p : kPayoffs)
    abcd.values.push_back("(" + format_label(p.a) + ", " + format_label(p.b) + ", " + format_label(p.c) + ", " +
                          format_label(p.d) + ")");
  Factor delta{"delta", {}, ""};
  for (double v : kDeltas) delta.values.push_back(format_label(v));
  Factor eps{"epsilon", {}, ""};
  for (double v : kEpsilons) eps.values.push_back(format_label(v));
  return EcSpace({n, abcd, delta, eps});
}

inline GameConfig config_from(const Config& c) {
  return {kRounds.at(c[0]), kPayoffs.at(c[1]), kDeltas.at(c[2]), kEpsilons.at(c[3])};
}

}  // namespace axia::games
