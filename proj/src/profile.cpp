#include "pfd/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pfd/errors.hpp"

namespace pfd {

ValuationProfile::ValuationProfile(std::vector<double> values) : values_(std::move(values))
{
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("profile values must be finite and non-negative");
    }
  }
  order_.resize(values_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return values_[a] > values_[b]; });
  sorted_.reserve(values_.size());
  for (std::size_t i : order_) {
    sorted_.push_back(values_[i]);
  }
}

ValuationProfile parse_profile(const std::string &text)
{
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) {
      throw DomainError("empty entry in profile '" + text + "'");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(first), &used);
    } catch (const std::exception &) {
      throw DomainError("cannot parse profile entry '" + item + "'");
    }
    if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
      throw DomainError("cannot parse profile entry '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw DomainError("profile is empty");
  }
  return ValuationProfile(std::move(values));
}

std::string format_profile(const ValuationProfile &profile)
{
  std::ostringstream out;
  out.precision(12);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << profile[i];
  }
  return out.str();
}

}  // namespace pfd
