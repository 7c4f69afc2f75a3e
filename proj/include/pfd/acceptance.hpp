#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pfd {

struct CriterionResult
{
  int id = 0;
  std::string section;
  std::string title;
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::string> failures;
  double seconds = 0.0;
};

struct AcceptanceSection
{
  int id = 0;
  std::string name;
  std::string title;
  std::uint64_t seed = 0;
};

/// The ten acceptance checks in order, each with its pinned seed.
const std::vector<AcceptanceSection> &acceptance_sections();

/// Throws DomainError for an unknown id.
CriterionResult run_criterion(int id);

/// Runs the named sections (all when `only` is empty). Names may also be
/// given as criterion numbers.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string> &only = {});

}  // namespace pfd
