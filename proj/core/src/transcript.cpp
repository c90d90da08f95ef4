#include "valid/transcript.hpp"

#include <ostream>

#include "valid/errors.hpp"

namespace valid {

EdgeTranscript::EdgeTranscript(size_t directed_edges, size_t dim, int rounds)
    : edges_(directed_edges), dim_(dim), rounds_(rounds) {
  if (rounds < 0) throw InvalidParameter("transcript needs rounds >= 0");
  const size_t total = directed_edges * static_cast<size_t>(rounds + 1) * dim;
  x_.assign(total, 0);
  g_.assign(total, 0);
}

size_t EdgeTranscript::offset(size_t edge, int t) const {
  if (edge >= edges_ || t < 0 || t > rounds_) throw InvalidParameter("transcript index out of range");
  return (edge * static_cast<size_t>(rounds_ + 1) + static_cast<size_t>(t)) * dim_;
}

std::span<const int64_t> EdgeTranscript::x(size_t edge, int t) const {
  return {x_.data() + offset(edge, t), dim_};
}

std::span<const int64_t> EdgeTranscript::g(size_t edge, int t) const {
  return {g_.data() + offset(edge, t), dim_};
}

void EdgeTranscript::record(size_t edge, int t, const ModelVec& x, const ModelVec& g) {
  if (x.dim() != dim_ || g.dim() != dim_) throw InvalidParameter("transcript dimension mismatch");
  const size_t at = offset(edge, t);
  for (size_t i = 0; i < dim_; ++i) {
    x_[at + i] = x[i].raw();
    g_[at + i] = g[i].raw();
  }
}

const char* to_string(View view) {
  switch (view) {
    case View::kOut: return "out";
    case View::kIn: return "in";
    case View::kInEta: return "in_eta";
    case View::kGamma: return "gamma";
  }
  return "unknown";
}

std::vector<int64_t> transcript_view(const EdgeTranscript& tr, const StepSchedule& schedule,
                                     size_t edge, View view) {
  const int T = tr.rounds();
  std::vector<int64_t> out;
  out.reserve(tr.dim() * static_cast<size_t>(T));
  for (int i = 1; i <= T; ++i) {
    switch (view) {
      case View::kOut:
        for (int64_t r : tr.x(edge, i)) out.push_back(r);
        break;
      case View::kIn:
        for (int64_t r : tr.x(edge, i - 1)) out.push_back(r);
        break;
      case View::kInEta: {
        const int64_t eta = schedule.eta_fixed(i).raw();
        for (int64_t r : tr.x(edge, i - 1)) out.push_back(fixed_mul_raw(eta, r));
        break;
      }
      case View::kGamma: {
        const int64_t alpha = schedule.alpha_fixed(i).raw();
        for (int64_t r : tr.g(edge, i)) out.push_back(fixed_mul_raw(alpha, r));
        break;
      }
    }
  }
  return out;
}

void dump_transcript(std::ostream& out, const EdgeTranscript& tr, const Graph& graph) {
  for (int t = 0; t <= tr.rounds(); ++t) {
    for (size_t e = 0; e < tr.edges(); ++e) {
      const auto [u, v] = graph.directed_edge(e);
      out << t << ' ' << u << ' ' << v << " x";
      for (int64_t r : tr.x(e, t)) out << ' ' << r;
      out << " g";
      for (int64_t r : tr.g(e, t)) out << ' ' << r;
      out << '\n';
    }
  }
}

}  // namespace valid
