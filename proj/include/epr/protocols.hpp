#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "epr/ensemble.hpp"
#include "epr/quantum.hpp"
#include "epr/random.hpp"

namespace epr {

// ---------------------------------------------------------------------------
// Classical channel

/// Which qubits Alice must drop from copy `copy`.
struct DiscardList {
  std::size_t copy = 0;
  std::vector<std::size_t> indices;
};

struct BasisAnnouncement {
  MeasurementAxis axis;
};

using MessagePayload = std::variant<DiscardList, OutcomeRecord, BasisAnnouncement>;

struct ClassicalMessage {
  MessagePayload payload;
  double send_time = 0.0;
  double arrival_time = 0.0;
};

/// The "telephone line": a fixed delay between send and arrival.
class ClassicalChannel {
 public:
  /// Throws DomainError for negative or non-finite latency.
  explicit ClassicalChannel(double latency_seconds);

  double latency() const noexcept { return latency_; }
  ClassicalMessage send(MessagePayload payload, double now) const;

 private:
  double latency_;
};

// ---------------------------------------------------------------------------
// Event log

enum class Actor { kAlice, kBob, kChannel };
std::string_view to_string(Actor a);

struct Event {
  double timestamp = 0.0;
  Actor actor = Actor::kAlice;
  std::string kind;
  std::string detail;
  /// Ids of messages whose content this event used.
  std::vector<std::size_t> consumed;
  /// True for an Alice decision that carries information about Bob's choice.
  bool informative = false;
};

/// Chronological record of one protocol run. Appends must be time-ordered and
/// may only consume messages that have already arrived; violations throw
/// InvariantViolation at the offending append.
class EventLog {
 public:
  /// Logs the send and returns the message id.
  std::size_t post(Actor sender, ClassicalMessage msg, std::string detail);
  /// Logs the arrival of message `id` at its arrival time.
  void deliver(std::size_t id);
  void record(Event e);

  /// Message content, only once it has arrived by `now`.
  const ClassicalMessage& read(std::size_t id, double now) const;

  const std::vector<Event>& events() const noexcept { return events_; }
  const std::vector<ClassicalMessage>& messages() const noexcept { return messages_; }

  /// Re-checks every invariant from scratch: non-decreasing timestamps and
  /// every consumed message arrived no later than the consuming event.
  bool satisfies_causality() const;

  /// One "timestamp\tactor\tkind\tdetail" line per event.
  std::string to_lines() const;

 private:
  void append(Event e);

  std::vector<Event> events_;
  std::vector<ClassicalMessage> messages_;
};

// ---------------------------------------------------------------------------
// Statistics and decisions

struct SigmaSum {
  std::int64_t value = 0;
  MeasurementAxis axis = MeasurementAxis::z();
  std::size_t n = 0;
};

enum class PreparationGuess { kZPrepared, kXPrepared };
enum class BasisGuess { kSameAsAlice, kOther };

std::string_view to_string(PreparationGuess g);
std::string_view to_string(BasisGuess g);

struct DistinguisherVerdict {
  PreparationGuess guess = PreparationGuess::kXPrepared;
  std::vector<SigmaSum> evidence;
};

/// Measures every state along `axis` and sums the +-1 outcomes.
/// Throws EmptyEnsembleError for an empty list.
SigmaSum sigma_sum(std::span<const PureQubitState> states, const MeasurementAxis& axis,
                   RandomSource& rng);

/// Guesses z-prepared iff every copy's sum is exactly zero.
/// Throws EmptyEnsembleError for no copies or an empty copy.
DistinguisherVerdict despagnat_distinguish(std::span<const std::vector<PureQubitState>> copies,
                                           const MeasurementAxis& axis, RandomSource& rng);

/// The all-zero rule on a single sum, with no classical help. On unpruned
/// ensembles the accuracy is 1/2; on pruned ones it is not, but getting pruned
/// input already required Bob's discard message.
PreparationGuess blind_distinguish(std::span<const PureQubitState> states,
                                   const MeasurementAxis& strategy, RandomSource& rng);

/// Alice compares her outcomes with Bob's record: perfect agreement means Bob
/// used her axis. Throws InvariantViolation if `now` precedes the message's
/// arrival, AlignmentError for empty or mismatched lists, DomainError if the
/// payload is not an OutcomeRecord.
BasisGuess telephone_compare(const MeasurementAxis& alice_axis,
                             std::span<const Outcome> alice_outcomes,
                             const ClassicalMessage& bob_record, double now);

/// Bob encodes a bit in his basis: 0 -> x, 1 -> z.
PreparedEnsemble preskill_signal_attempt(int bit, std::size_t n, RandomSource& rng);

// ---------------------------------------------------------------------------
// Timelines

enum class TimelineScenario { kSignalAttempt, kTelephone, kBalancedDistinguish };
std::string_view to_string(TimelineScenario s);

inline constexpr std::size_t kDefaultCopies = 10;

/// Plays one full run of `scenario` with Bob's basis drawn from `rng`.
/// For kBalancedDistinguish, `n` is the balanced size of each copy and must
/// be even. Throws DomainError for negative latency or n == 0.
EventLog run_timeline(TimelineScenario scenario, std::size_t n, double latency,
                      RandomSource& rng, std::size_t copies = kDefaultCopies);

}  // namespace epr
