#pragma once

#include "steerlab/algebra.hpp"
#include "steerlab/universe.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace steerlab {

/// One concrete resolver-visible answer. `answer_subset` is the subset the
/// behavior selected; `rrsets` are the candidates that fit on the wire
/// (whole RRsets only — truncation may drop some but never splits one).
struct ServedResponse {
  std::vector<std::string> answer_subset;  // selected ids, canonical order
  std::vector<Candidate> rrsets;           // encoded candidates, wire order
  std::uint32_t ttl = 0;                   // min ttl across encoded rrsets, 0 if none
  bool truncated = false;
  bool empty = false;  // the observable was EMPTY at this context
  std::vector<std::uint8_t> wire;
  std::size_t steps_used = 0;  // C4 accounting
  std::size_t step_bound = 0;
};

enum class ServeMode { Deterministic, Sample };

struct EncodeOptions {
  std::string qname = "svc.example.com";
  RrType qtype = RrType::A;
};

/// Evaluate f at c and refine the distribution to one concrete response.
/// Deterministic mode serves the max-probability subset (ties: earliest in
/// canonical subset order); sample mode draws from the exact distribution
/// with the seeded generator. Always returns, within step_bound steps.
ServedResponse serve(const Behavior& f, const QueryContext& c, ServeMode mode,
                     std::uint64_t seed = 0, const EncodeOptions& opts = {});

/// Wire-encode an answer set for a universe: 12-byte header (id 0, QR+AA,
/// TC when truncating), uncompressed question, answer RRs. If the message
/// exceeds 512 bytes, whole RRsets are dropped (largest first, ties in id
/// order) until it fits, and TC is set.
struct EncodeResult {
  std::vector<std::uint8_t> wire;
  bool truncated = false;
  std::vector<std::string> encoded_ids;  // candidates that made it onto the wire
};
EncodeResult encode(const Universe& u, const std::vector<std::string>& answer_ids,
                    const EncodeOptions& opts);

/// Lowercase hex, two digits per byte, no separators.
std::string to_hex(const std::vector<std::uint8_t>& bytes);

/// C5 guard: replay a serving function `repeats` times; pass iff every wire
/// is byte-identical. The callable form exists so tests can aim it at a
/// deliberately stateful double.
struct CacheCheckResult {
  bool pass = false;
  std::size_t first_divergence = 0;  // repeat index of the first mismatch
};
CacheCheckResult cache_consistency_check(const std::function<ServedResponse()>& server,
                                         std::size_t repeats);
CacheCheckResult cache_consistency_check(const Behavior& f, const QueryContext& c,
                                         std::size_t repeats);

/// A window of repeated deterministic observations for one context.
struct CacheProbe {
  QueryContext context;
  std::uint32_t window_seconds = 0;
  std::vector<ServedResponse> observations;

  bool consistent() const;
};
CacheProbe probe_cache(const Behavior& f, const QueryContext& c, std::uint32_t window_seconds,
                       std::size_t repeats);

}  // namespace steerlab
