#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "valid/graph.hpp"
#include "valid/model_vec.hpp"
#include "valid/schedule.hpp"

namespace valid {

/// Message history of every directed edge: x^(t) and g^(t) for t = 0..T,
/// stored as raw fixed-point integers. Round 0 is all zeros.
class EdgeTranscript {
 public:
  EdgeTranscript() = default;
  EdgeTranscript(size_t directed_edges, size_t dim, int rounds);

  size_t edges() const { return edges_; }
  size_t dim() const { return dim_; }
  int rounds() const { return rounds_; }
  bool empty() const { return edges_ == 0; }

  std::span<const int64_t> x(size_t edge, int t) const;
  std::span<const int64_t> g(size_t edge, int t) const;
  ModelVec x_vec(size_t edge, int t) const { return ModelVec::from_raw(x(edge, t)); }
  ModelVec g_vec(size_t edge, int t) const { return ModelVec::from_raw(g(edge, t)); }

  void record(size_t edge, int t, const ModelVec& x, const ModelVec& g);

  bool operator==(const EdgeTranscript&) const = default;

 private:
  size_t offset(size_t edge, int t) const;

  size_t edges_ = 0;
  size_t dim_ = 0;
  int rounds_ = 0;
  std::vector<int64_t> x_;
  std::vector<int64_t> g_;
};

enum class View { kOut, kIn, kInEta, kGamma };
inline constexpr View kAllViews[] = {View::kOut, View::kIn, View::kInEta, View::kGamma};

const char* to_string(View view);

/// Flattened view of length d*T. Block i (1-based) holds
///   out:    x^(i)
///   in:     x^(i-1)
///   in_eta: round(eta(i) * x^(i-1))
///   gamma:  round(alpha(i) * g^(i))
/// in_eta pairs x^(i-1) with the coefficient of the round that consumes it,
/// which is what the mixing step multiplies.
std::vector<int64_t> transcript_view(const EdgeTranscript& tr, const StepSchedule& schedule,
                                     size_t edge, View view);

/// One text line per (t, u, v): "t u v x r1 r2 ... g r1 r2 ...".
void dump_transcript(std::ostream& out, const EdgeTranscript& tr, const Graph& graph);

}  // namespace valid
