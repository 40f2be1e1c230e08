#include "epr/protocols.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "epr/errors.hpp"

namespace epr {

namespace {

std::string_view basis_name(const MeasurementAxis& axis) {
  if (axis == MeasurementAxis::x()) return "x";
  if (axis == MeasurementAxis::z()) return "z";
  return "custom";
}

MeasurementAxis basis_for_bit(int bit) {
  return bit == 0 ? MeasurementAxis::x() : MeasurementAxis::z();
}

}  // namespace

ClassicalChannel::ClassicalChannel(double latency_seconds) : latency_(latency_seconds) {
  if (!std::isfinite(latency_seconds) || latency_seconds < 0.0)
    throw DomainError(fmt::format("latency must be finite and >= 0, got {}", latency_seconds));
}

ClassicalMessage ClassicalChannel::send(MessagePayload payload, double now) const {
  return {std::move(payload), now, now + latency_};
}

std::string_view to_string(Actor a) {
  switch (a) {
    case Actor::kAlice: return "Alice";
    case Actor::kBob: return "Bob";
    case Actor::kChannel: return "Channel";
  }
  return "?";
}

std::string_view to_string(PreparationGuess g) {
  return g == PreparationGuess::kZPrepared ? "z-prepared" : "x-prepared";
}

std::string_view to_string(BasisGuess g) {
  return g == BasisGuess::kSameAsAlice ? "same-as-alice" : "other";
}

std::string_view to_string(TimelineScenario s) {
  switch (s) {
    case TimelineScenario::kSignalAttempt: return "signal-attempt";
    case TimelineScenario::kTelephone: return "telephone";
    case TimelineScenario::kBalancedDistinguish: return "balanced-distinguish";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void EventLog::append(Event e) {
  if (!events_.empty() && e.timestamp < events_.back().timestamp)
    throw InvariantViolation(fmt::format("event '{}' at t={} precedes previous event at t={}",
                                         e.kind, e.timestamp, events_.back().timestamp));
  for (std::size_t id : e.consumed) {
    if (id >= messages_.size())
      throw InvariantViolation(fmt::format("event '{}' consumes unknown message {}", e.kind, id));
    if (e.timestamp < messages_[id].arrival_time)
      throw InvariantViolation(fmt::format("event '{}' at t={} consumes message {} arriving at t={}",
                                           e.kind, e.timestamp, id, messages_[id].arrival_time));
  }
  events_.push_back(std::move(e));
}

std::size_t EventLog::post(Actor sender, ClassicalMessage msg, std::string detail) {
  const std::size_t id = messages_.size();
  const double sent = msg.send_time;
  const double arrives = msg.arrival_time;
  messages_.push_back(std::move(msg));
  append({sent, sender, "send", fmt::format("msg={} {} arrival={}", id, detail, arrives), {}, false});
  return id;
}

void EventLog::deliver(std::size_t id) {
  if (id >= messages_.size()) throw InvariantViolation(fmt::format("deliver: unknown message {}", id));
  append({messages_[id].arrival_time, Actor::kChannel, "arrive", fmt::format("msg={}", id), {}, false});
}

void EventLog::record(Event e) { append(std::move(e)); }

const ClassicalMessage& EventLog::read(std::size_t id, double now) const {
  if (id >= messages_.size()) throw InvariantViolation(fmt::format("read: unknown message {}", id));
  const ClassicalMessage& m = messages_[id];
  if (now < m.arrival_time)
    throw InvariantViolation(
        fmt::format("message {} read at t={} before its arrival at t={}", id, now, m.arrival_time));
  return m;
}

bool EventLog::satisfies_causality() const {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (i > 0 && events_[i].timestamp < events_[i - 1].timestamp) return false;
    for (std::size_t id : events_[i].consumed) {
      if (id >= messages_.size()) return false;
      if (events_[i].timestamp < messages_[id].arrival_time) return false;
    }
    if (events_[i].informative && events_[i].consumed.empty()) return false;
  }
  return true;
}

std::string EventLog::to_lines() const {
  std::string out;
  for (const auto& e : events_)
    out += fmt::format("{}\t{}\t{}\t{}\n", e.timestamp, to_string(e.actor), e.kind, e.detail);
  return out;
}

// ---------------------------------------------------------------------------

SigmaSum sigma_sum(std::span<const PureQubitState> states, const MeasurementAxis& axis,
                   RandomSource& rng) {
  if (states.empty()) throw EmptyEnsembleError("sigma_sum: no states to measure");
  std::int64_t total = 0;
  for (const auto& s : states) total += value_of(measure_single(s, axis, rng).outcome);
  return {total, axis, states.size()};
}

DistinguisherVerdict despagnat_distinguish(std::span<const std::vector<PureQubitState>> copies,
                                           const MeasurementAxis& axis, RandomSource& rng) {
  if (copies.empty()) throw EmptyEnsembleError("despagnat_distinguish: no copies");
  DistinguisherVerdict verdict;
  verdict.evidence.reserve(copies.size());
  bool all_zero = true;
  for (const auto& copy : copies) {
    verdict.evidence.push_back(sigma_sum(copy, axis, rng));
    all_zero = all_zero && verdict.evidence.back().value == 0;
  }
  verdict.guess = all_zero ? PreparationGuess::kZPrepared : PreparationGuess::kXPrepared;
  return verdict;
}

PreparationGuess blind_distinguish(std::span<const PureQubitState> states,
                                   const MeasurementAxis& strategy, RandomSource& rng) {
  return sigma_sum(states, strategy, rng).value == 0 ? PreparationGuess::kZPrepared
                                                     : PreparationGuess::kXPrepared;
}

BasisGuess telephone_compare(const MeasurementAxis& alice_axis,
                             std::span<const Outcome> alice_outcomes,
                             const ClassicalMessage& bob_record, double now) {
  (void)alice_axis;  // the guess is relative to Alice's own axis
  if (now < bob_record.arrival_time)
    throw InvariantViolation(fmt::format("telephone_compare at t={} before record arrives at t={}",
                                         now, bob_record.arrival_time));
  const auto* record = std::get_if<OutcomeRecord>(&bob_record.payload);
  if (record == nullptr) throw DomainError("telephone_compare: message is not an outcome record");
  if (alice_outcomes.empty() || record->size() != alice_outcomes.size())
    throw AlignmentError(fmt::format("telephone_compare: {} local outcomes vs {} in Bob's record",
                                     alice_outcomes.size(), record->size()));
  const bool agree = std::equal(alice_outcomes.begin(), alice_outcomes.end(),
                                record->outcomes.begin());
  return agree ? BasisGuess::kSameAsAlice : BasisGuess::kOther;
}

PreparedEnsemble preskill_signal_attempt(int bit, std::size_t n, RandomSource& rng) {
  if (bit != 0 && bit != 1) throw DomainError(fmt::format("signal bit must be 0 or 1, got {}", bit));
  return prepare_ensemble(n, basis_for_bit(bit), rng);
}

// ---------------------------------------------------------------------------

namespace {

void signal_attempt_timeline(EventLog& log, std::size_t n, RandomSource& rng) {
  const int bit = rng.bernoulli(0.5) ? 1 : 0;
  const MeasurementAxis bob_axis = basis_for_bit(bit);
  auto prepared = preskill_signal_attempt(bit, n, rng);
  log.record({0.0, Actor::kBob, "measure",
              fmt::format("bit={} basis={} pairs={}", bit, basis_name(bob_axis), n), {}, false});

  const auto sum = sigma_sum(prepared.ensemble.states(), MeasurementAxis::z(), rng);
  log.record({0.0, Actor::kAlice, "measure", fmt::format("axis=z sigma={}", sum.value), {}, false});
  const auto guess = sum.value == 0 ? PreparationGuess::kZPrepared : PreparationGuess::kXPrepared;
  log.record({0.0, Actor::kAlice, "decision",
              fmt::format("guess={} information=none expected_accuracy=0.5", to_string(guess)),
              {}, false});
}

void telephone_timeline(EventLog& log, const ClassicalChannel& channel, std::size_t n,
                        RandomSource& rng) {
  const MeasurementAxis bob_axis = basis_for_bit(rng.bernoulli(0.5) ? 1 : 0);
  const MeasurementAxis alice_axis = MeasurementAxis::x();
  auto prepared = prepare_ensemble(n, bob_axis, rng);
  log.record({0.0, Actor::kBob, "measure",
              fmt::format("basis={} pairs={}", basis_name(bob_axis), n), {}, false});
  const std::size_t id = log.post(Actor::kBob, channel.send(prepared.record, 0.0),
                                  "payload=outcome-record");

  std::vector<Outcome> mine;
  mine.reserve(n);
  for (const auto& s : prepared.ensemble.states())
    mine.push_back(measure_single(s, alice_axis, rng).outcome);
  log.record({0.0, Actor::kAlice, "measure", fmt::format("axis=x qubits={}", n), {}, false});

  log.deliver(id);
  const double now = log.messages()[id].arrival_time;
  const auto guess = telephone_compare(alice_axis, mine, log.read(id, now), now);
  const std::string_view guessed = guess == BasisGuess::kSameAsAlice ? "x" : "z";
  log.record({now, Actor::kAlice, "decision",
              fmt::format("guess={}", guessed), {id}, true});
}

void balanced_timeline(EventLog& log, const ClassicalChannel& channel, std::size_t n,
                       std::size_t copies, RandomSource& rng) {
  if (n % 2 != 0)
    throw DomainError(fmt::format("balanced-distinguish needs an even copy size, got {}", n));
  if (copies == 0) throw DomainError("balanced-distinguish needs at least one copy");
  const MeasurementAxis bob_axis = basis_for_bit(rng.bernoulli(0.5) ? 1 : 0);

  std::vector<Ensemble> held;
  std::vector<std::size_t> ids;
  held.reserve(copies);
  for (std::size_t c = 0; c < copies; ++c) {
    auto prep = prepare_balanced(n, bob_axis, rng);
    log.record({0.0, Actor::kBob, "measure",
                fmt::format("copy={} basis={} pairs={} kept={}", c, basis_name(bob_axis),
                            prep.raw.ensemble.size(), prep.balanced.ensemble.size()),
                {}, false});
    ids.push_back(log.post(Actor::kBob,
                           channel.send(DiscardList{c, prep.balanced.discarded}, 0.0),
                           fmt::format("payload=discard-list copy={} count={}", c,
                                       prep.balanced.discarded.size())));
    held.push_back(std::move(prep.raw.ensemble));
  }
  for (std::size_t id : ids) log.deliver(id);

  const double now = log.messages()[ids.back()].arrival_time;
  std::vector<std::vector<PureQubitState>> bare;
  bare.reserve(copies);
  for (std::size_t c = 0; c < copies; ++c) {
    const auto& discard = std::get<DiscardList>(log.read(ids[c], now).payload);
    bare.push_back(apply_discard(held[c], discard.indices).states());
  }
  log.record({now, Actor::kAlice, "discard", fmt::format("copies={}", copies), ids, false});

  const auto verdict = despagnat_distinguish(bare, MeasurementAxis::z(), rng);
  std::string sums;
  for (const auto& s : verdict.evidence) sums += (sums.empty() ? "" : ",") + std::to_string(s.value);
  log.record({now, Actor::kAlice, "decision",
              fmt::format("guess={} sigma=[{}]", to_string(verdict.guess), sums), ids, true});
}

}  // namespace

EventLog run_timeline(TimelineScenario scenario, std::size_t n, double latency,
                      RandomSource& rng, std::size_t copies) {
  const ClassicalChannel channel(latency);
  if (n == 0) throw EmptyEnsembleError("run_timeline: n must be at least 1");
  EventLog log;
  switch (scenario) {
    case TimelineScenario::kSignalAttempt: signal_attempt_timeline(log, n, rng); break;
    case TimelineScenario::kTelephone: telephone_timeline(log, channel, n, rng); break;
    case TimelineScenario::kBalancedDistinguish:
      balanced_timeline(log, channel, n, copies, rng);
      break;
  }
  if (!log.satisfies_causality())
    throw InvariantViolation(fmt::format("{} timeline violates causality", to_string(scenario)));
  return log;
}

}  // namespace epr
