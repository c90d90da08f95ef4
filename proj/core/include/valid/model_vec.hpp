#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "valid/fixed.hpp"

namespace valid {

/// d-dimensional model or gradient vector with fixed-point entries.
class ModelVec {
 public:
  ModelVec() = default;
  explicit ModelVec(size_t dim) : entries_(dim) {}
  explicit ModelVec(std::vector<Fixed> entries) : entries_(std::move(entries)) {}

  static ModelVec from_doubles(std::span<const double> values);
  static ModelVec from_raw(std::span<const int64_t> raw);

  size_t dim() const { return entries_.size(); }
  Fixed& operator[](size_t i) { return entries_[i]; }
  Fixed operator[](size_t i) const { return entries_[i]; }
  std::span<const Fixed> entries() const { return entries_; }

  ModelVec& operator+=(const ModelVec& other);
  ModelVec& operator-=(const ModelVec& other);
  friend ModelVec operator+(ModelVec lhs, const ModelVec& rhs) { return lhs += rhs; }
  friend ModelVec operator-(ModelVec lhs, const ModelVec& rhs) { return lhs -= rhs; }

  /// Entrywise rounded product with a fixed-point coefficient.
  ModelVec scaled(Fixed coeff) const;

  /// Exact sum of squared raw entries (in 128-bit), converted to a real once.
  double squared_norm() const;
  double norm() const;

  std::vector<double> to_doubles() const;
  void append_raw(std::vector<int64_t>& out) const;

  bool operator==(const ModelVec&) const = default;

 private:
  std::vector<Fixed> entries_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(const ModelVec& a, std::span<const double> b);

}  // namespace valid
