#include "valid/validation_state.hpp"

namespace valid {

const char* to_string(Flag flag) { return flag == Flag::kTop ? "TOP" : "BOT"; }

const char* to_string(Cause cause) {
  switch (cause) {
    case Cause::kNone: return "none";
    case Cause::kBoundViolation: return "bound_violation";
    case Cause::kBroadcastConflict: return "broadcast_conflict";
    case Cause::kHashInconsistency: return "hash_inconsistency";
    case Cause::kConsistencyCheck: return "consistency_check";
    case Cause::kOptimalityCheck: return "optimality_check";
    case Cause::kHeterogeneityCheck: return "heterogeneity_check";
    case Cause::kAgreementPropagation: return "agreement_propagation";
  }
  return "unknown";
}

void ValidationState::raise(Cause c) {
  if (c == Cause::kNone) return;
  if (flag_ == Flag::kTop) {
    flag_ = Flag::kBot;
    cause_ = c;
  }
  fired_ |= 1u << static_cast<unsigned>(c);
}

std::string ValidationState::fired_string() const {
  std::string out;
  for (unsigned c = 1; c <= static_cast<unsigned>(Cause::kAgreementPropagation); ++c) {
    if ((fired_ >> c) & 1u) {
      if (!out.empty()) out += '+';
      out += to_string(static_cast<Cause>(c));
    }
  }
  return out.empty() ? "none" : out;
}

}  // namespace valid
