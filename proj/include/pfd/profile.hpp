#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace pfd {

/// Finite multiset of non-negative agent values. Agent identity is the index
/// into values(); sorted() is the descending view v_(1) >= v_(2) >= ...
class ValuationProfile
{
public:
  ValuationProfile() = default;
  explicit ValuationProfile(std::vector<double> values);
  ValuationProfile(std::initializer_list<double> values) : ValuationProfile(std::vector<double>(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double> &values() const { return values_; }

  /// Values in descending order.
  const std::vector<double> &sorted() const { return sorted_; }
  /// Agent indices in descending value order; equal values keep index order.
  const std::vector<std::size_t> &order() const { return order_; }

  /// i-th highest value, 1-based; 0 when i > n.
  double order_statistic(std::size_t i) const { return i >= 1 && i <= sorted_.size() ? sorted_[i - 1] : 0.0; }

  bool operator==(const ValuationProfile &other) const { return values_ == other.values_; }

private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

/// Parses "v1,v2,..." ("inf" is rejected: values must be finite).
ValuationProfile parse_profile(const std::string &text);

std::string format_profile(const ValuationProfile &profile);

}  // namespace pfd
