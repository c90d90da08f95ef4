#include "valid/poly_hash.hpp"

namespace valid {

FieldElement poly_hash(const PrimeField& field, FieldElement key, std::span<const int64_t> xi) {
  FieldElement acc = 0;
  for (size_t i = xi.size(); i-- > 0;) acc = field.add(field.mul(acc, key), field.reduce(xi[i]));
  return acc;
}

EdgeViews edge_views(const EdgeTranscript& tr, const StepSchedule& schedule, size_t edge) {
  EdgeViews ev;
  for (size_t k = 0; k < 4; ++k) ev.views[k] = transcript_view(tr, schedule, edge, kAllViews[k]);
  return ev;
}

ViewHashes hash_views(const PrimeField& field, FieldElement key, const EdgeViews& views) {
  ViewHashes h{};
  for (size_t k = 0; k < 4; ++k) h[k] = poly_hash(field, key, views.views[k]);
  return h;
}

ViewHashes hash_transcript_views(const PrimeField& field, FieldElement key,
                                 const EdgeTranscript& tr, const StepSchedule& schedule,
                                 size_t edge) {
  return hash_views(field, key, edge_views(tr, schedule, edge));
}

double collision_bound(size_t length, uint64_t p) {
  if (length <= 1) return 0.0;
  return static_cast<double>(length - 1) / static_cast<double>(p);
}

}  // namespace valid
