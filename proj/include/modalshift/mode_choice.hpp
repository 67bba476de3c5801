#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "modalshift/city.hpp"
#include "modalshift/los.hpp"
#include "modalshift/population.hpp"

namespace modalshift {

/// Fixed tie-break precedence for equal suitability.
inline constexpr std::array<Mode, kModes> kModePrecedence = {Mode::car,  Mode::subway,
                                                             Mode::bus,  Mode::brt,
                                                             Mode::taxi, Mode::walk};

/// Lowest score given to the worst mode on an LOS-derived criterion.
inline constexpr double kLosScoreFloor = 0.1;

using CriterionScores = std::array<double, kCommuteCriteria>;

/// Expert scores per mode and criterion, normalised by each criterion's
/// maximum over modes.
class ExpertScoreMatrix {
public:
  /// Every mode scores 1 on every criterion.
  ExpertScoreMatrix() { for (auto& r : normalized_) r.fill(1.0); }
  /// raw[mode][criterion] on the 1..10 scale.
  explicit ExpertScoreMatrix(const std::array<CriterionScores, kModes>& raw);

  double score(Mode m, CommuteCriterion c) const {
    return normalized_[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
  }
  const CriterionScores& row(Mode m) const { return normalized_[static_cast<std::size_t>(m)]; }

private:
  std::array<CriterionScores, kModes> normalized_{};
};

ExpertScoreMatrix load_expert_matrix(const std::filesystem::path& path);
ExpertScoreMatrix parse_expert_matrix(std::string_view json_text);

/// LOS per mode for one OD, indexed by Mode; `available` marks the modes the
/// worker may use.
using ModeLos = std::array<LOS, kModes>;
using ModeMask = std::array<bool, kModes>;

/// Criterion scores of `mode`: cost and times by inverse min-max over the
/// available modes (best 1, worst kLosScoreFloor, all equal 1); the other
/// criteria from the expert matrix. Throws RuntimeError if no mode is
/// available.
CriterionScores criterion_scores(Mode mode, const ModeLos& los, const ModeMask& available,
                                 const ExpertScoreMatrix& matrix);

/// Weighted sum of criterion scores.
double suitability(std::span<const double> weights, std::span<const double> scores);

enum class Unavailable : std::uint8_t { none, no_car, beyond_walk_cutoff, no_route };
std::string_view to_string(Unavailable r);

struct ModeDecision {
  AgentId worker = 0;
  Mode chosen = Mode::walk;
  std::array<double, kModes> suitability{};
  std::array<Unavailable, kModes> reason{};
  bool tie = false;

  bool available(Mode m) const { return reason[static_cast<std::size_t>(m)] == Unavailable::none; }
};

ModeMask mode_availability(const HouseholdAgent& household, const ModeLos& los,
                           double walk_cutoff_km, std::array<Unavailable, kModes>* reasons = nullptr);

/// Picks the available mode with maximal suitability. Throws RuntimeError when
/// no mode is available.
ModeDecision choose_mode(const WorkerAgent& worker, const HouseholdAgent& household,
                         const ModeLos& los, const ExpertScoreMatrix& matrix,
                         double walk_cutoff_km);

ModeDecision choose_mode(const WorkerAgent& worker, const HouseholdAgent& household,
                         ZoneId origin, const CityModel& city, const TariffConfig& tariffs,
                         const ExpertScoreMatrix& matrix);

}  // namespace modalshift
