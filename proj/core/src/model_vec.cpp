#include "valid/model_vec.hpp"

#include <cmath>

#include "valid/errors.hpp"

namespace valid {

namespace {

void require_same_dim(const ModelVec& a, const ModelVec& b) {
  if (a.dim() != b.dim()) {
    throw InvalidParameter("model dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()));
  }
}

}  // namespace

ModelVec ModelVec::from_doubles(std::span<const double> values) {
  std::vector<Fixed> entries;
  entries.reserve(values.size());
  for (double v : values) entries.push_back(Fixed::from_double(v));
  return ModelVec(std::move(entries));
}

ModelVec ModelVec::from_raw(std::span<const int64_t> raw) {
  std::vector<Fixed> entries;
  entries.reserve(raw.size());
  for (int64_t r : raw) entries.push_back(Fixed::from_raw(r));
  return ModelVec(std::move(entries));
}

ModelVec& ModelVec::operator+=(const ModelVec& other) {
  require_same_dim(*this, other);
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ModelVec& ModelVec::operator-=(const ModelVec& other) {
  require_same_dim(*this, other);
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ModelVec ModelVec::scaled(Fixed coeff) const {
  ModelVec out(dim());
  for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * coeff;
  return out;
}

double ModelVec::squared_norm() const {
  unsigned __int128 acc = 0;
  for (Fixed e : entries_) {
    const int64_t r = e.raw();
    const unsigned __int128 mag = static_cast<unsigned __int128>(r < 0 ? -static_cast<__int128>(r) : r);
    const unsigned __int128 sq = mag * mag;
    if (acc + sq < acc) throw OverflowError("squared norm overflow");
    acc += sq;
  }
  return std::ldexp(static_cast<double>(acc), -2 * Fixed::kFracBits);
}

double ModelVec::norm() const { return std::sqrt(squared_norm()); }

std::vector<double> ModelVec::to_doubles() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (Fixed e : entries_) out.push_back(e.to_double());
  return out;
}

void ModelVec::append_raw(std::vector<int64_t>& out) const {
  for (Fixed e : entries_) out.push_back(e.raw());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidParameter("dimension mismatch in squared_distance");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double squared_distance(const ModelVec& a, std::span<const double> b) {
  const auto values = a.to_doubles();
  return squared_distance(values, b);
}

}  // namespace valid
