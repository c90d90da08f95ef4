#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace valid {

enum class Flag { kTop, kBot };

enum class Cause : uint8_t {
  kNone = 0,
  kBoundViolation,
  kBroadcastConflict,
  kHashInconsistency,
  kConsistencyCheck,
  kOptimalityCheck,
  kHeterogeneityCheck,
  kAgreementPropagation,
};

const char* to_string(Flag flag);
const char* to_string(Cause cause);

/// Per-agent validation flag. `cause` is the first check that fired;
/// `fired` records every check that fired, since later checks keep running.
class ValidationState {
 public:
  Flag flag() const { return flag_; }
  bool top() const { return flag_ == Flag::kTop; }
  Cause cause() const { return cause_; }
  uint32_t fired() const { return fired_; }
  bool has_fired(Cause c) const { return (fired_ >> static_cast<unsigned>(c)) & 1u; }
  /// Causes in enum order, "+"-joined; "none" if nothing fired.
  std::string fired_string() const;

  /// Sets BOT; never reverts.
  void raise(Cause c);

  bool operator==(const ValidationState&) const = default;

 private:
  Flag flag_ = Flag::kTop;
  Cause cause_ = Cause::kNone;
  uint32_t fired_ = 0;
};

using ValidationStates = std::vector<ValidationState>;

}  // namespace valid
