#pragma once

#include <array>
#include <span>
#include <vector>

#include "valid/field.hpp"
#include "valid/transcript.hpp"

namespace valid {

/// sum_i xi_i * s^(i-1) mod p, evaluated by Horner's rule from the last entry.
FieldElement poly_hash(const PrimeField& field, FieldElement key, std::span<const int64_t> xi);

/// Hashes of the out, in, in_eta and gamma views, in kAllViews order.
using ViewHashes = std::array<FieldElement, 4>;

/// The four views of one directed edge, materialized once and hashed under
/// many keys.
struct EdgeViews {
  std::array<std::vector<int64_t>, 4> views;
};

EdgeViews edge_views(const EdgeTranscript& tr, const StepSchedule& schedule, size_t edge);
ViewHashes hash_views(const PrimeField& field, FieldElement key, const EdgeViews& views);
ViewHashes hash_transcript_views(const PrimeField& field, FieldElement key,
                                 const EdgeTranscript& tr, const StepSchedule& schedule,
                                 size_t edge);

/// Upper bound (L - 1) / p on Pr_s[hash(s, a) == hash(s, b)] for fixed a != b of length L.
double collision_bound(size_t length, uint64_t p);

}  // namespace valid
