#include "steerlab/wire.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace steerlab {

namespace {

constexpr std::size_t kWireLimit = 512;
constexpr std::uint16_t kFlagsBase = 0x8400;  // QR=1, AA=1
constexpr std::uint16_t kFlagTc = 0x0200;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::uint16_t rrtype_code(RrType t) { return t == RrType::A ? 1 : 28; }

std::vector<std::uint8_t> encode_name(const std::string& qname) {
  std::string name = qname;
  if (!name.empty() && name.back() == '.') name.pop_back();  // accept absolute form
  if (name.empty()) {
    throw Error(ErrorKind::InvalidName, "empty domain name");
  }
  std::vector<std::uint8_t> out;
  std::size_t start = 0;
  while (start <= name.size()) {
    const std::size_t dot = name.find('.', start);
    const std::string label = name.substr(start, dot == std::string::npos ? dot : dot - start);
    if (label.empty()) {
      throw Error(ErrorKind::InvalidName, "empty label in '" + qname + "'");
    }
    if (label.size() > 63) {
      throw Error(ErrorKind::InvalidName, "label over 63 bytes in '" + qname + "'");
    }
    for (char ch : label) {
      const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
      if (!ok) {
        throw Error(ErrorKind::InvalidName, "bad character in label of '" + qname + "'");
      }
    }
    out.push_back(static_cast<std::uint8_t>(label.size()));
    out.insert(out.end(), label.begin(), label.end());
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  out.push_back(0);
  if (out.size() > 255) {
    throw Error(ErrorKind::InvalidName, "name over 255 bytes: '" + qname + "'");
  }
  return out;
}

std::size_t candidate_wire_size(const Candidate& c, std::size_t name_len) {
  std::size_t sum = 0;
  for (const auto& rdata : c.rdata()) {
    sum += name_len + 2 + 2 + 4 + 2 + rdata.size();  // type, class, ttl, rdlength
  }
  return sum;
}

}  // namespace

EncodeResult encode(const Universe& u, const std::vector<std::string>& answer_ids,
                    const EncodeOptions& opts) {
  const std::vector<std::uint8_t> name = encode_name(opts.qname);

  std::vector<std::string> ids = answer_ids;
  std::sort(ids.begin(), ids.end());
  std::size_t total = 12 + name.size() + 4;
  for (const std::string& id : ids) {
    total += candidate_wire_size(u.candidates()[u.candidate_index(id)], name.size());
  }

  // Whole-RRset truncation: drop the largest RRset first (ties resolved in
  // id order) until the message fits.
  EncodeResult result;
  while (total > kWireLimit && !ids.empty()) {
    std::size_t victim = 0;
    std::size_t victim_size = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t size =
          candidate_wire_size(u.candidates()[u.candidate_index(ids[i])], name.size());
      if (size > victim_size) {  // ids are sorted, so ties drop the earliest id
        victim = i;
        victim_size = size;
      }
    }
    total -= victim_size;
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(victim));
    result.truncated = true;
  }

  std::uint16_t answer_count = 0;
  for (const std::string& id : ids) {
    answer_count = static_cast<std::uint16_t>(
        answer_count + u.candidates()[u.candidate_index(id)].rdata().size());
  }

  std::vector<std::uint8_t>& wire = result.wire;
  put_u16(wire, 0);  // fixed id
  put_u16(wire, static_cast<std::uint16_t>(kFlagsBase | (result.truncated ? kFlagTc : 0)));
  put_u16(wire, 1);  // qdcount
  put_u16(wire, answer_count);
  put_u16(wire, 0);  // nscount
  put_u16(wire, 0);  // arcount
  wire.insert(wire.end(), name.begin(), name.end());
  put_u16(wire, rrtype_code(opts.qtype));
  put_u16(wire, 1);  // class IN
  for (const std::string& id : ids) {
    const Candidate& c = u.candidates()[u.candidate_index(id)];
    for (const auto& rdata : c.rdata()) {
      wire.insert(wire.end(), name.begin(), name.end());
      put_u16(wire, rrtype_code(c.rrtype()));
      put_u16(wire, 1);
      put_u32(wire, c.ttl());
      put_u16(wire, static_cast<std::uint16_t>(rdata.size()));
      wire.insert(wire.end(), rdata.begin(), rdata.end());
    }
  }
  result.encoded_ids = std::move(ids);
  return result;
}

ServedResponse serve(const Behavior& f, const QueryContext& c, ServeMode mode,
                     std::uint64_t seed, const EncodeOptions& opts) {
  const OutcomeRow row = f.row(c).normalized();  // throws on foreign contexts

  ServedResponse r;
  // C4: selection must finish within a bound fixed by the universe shape
  // alone — one step per row entry plus one per encoded candidate.
  r.step_bound = f.universe()->subset_count() + f.universe()->candidate_count() + 16;

  std::size_t chosen_ordinal = 0;
  if (row.is_zero()) {
    r.empty = true;
    ++r.steps_used;
  } else if (mode == ServeMode::Deterministic) {
    // Max probability; ties go to the subset earliest in canonical order.
    Rational best = -1;
    for (const auto& [ord, w] : row.entries()) {
      ++r.steps_used;
      if (w > best) {
        best = w;
        chosen_ordinal = ord;
      }
    }
  } else {
    // Exact sampling: scale the normalized row to a common denominator and
    // draw an integer below it, rejection-sampled for uniformity.
    Integer denom = 1;
    for (const auto& [_, w] : row.entries()) {
      denom = boost::multiprecision::lcm(denom, boost::multiprecision::denominator(w));
    }
    std::vector<std::pair<std::size_t, Integer>> scaled;
    Integer total = 0;
    for (const auto& [ord, w] : row.entries()) {
      ++r.steps_used;
      const Integer ticket = boost::multiprecision::numerator(w) *
                             (denom / boost::multiprecision::denominator(w));
      total += ticket;
      scaled.emplace_back(ord, total);
    }
    std::mt19937_64 rng(seed);
    if (total > Integer(std::numeric_limits<std::uint64_t>::max())) {
      throw Error(ErrorKind::CapExceeded, "sampling denominator exceeds 64 bits");
    }
    const std::uint64_t total64 = static_cast<std::uint64_t>(total);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % total64);
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    const Integer point = draw % total64;
    for (const auto& [ord, cumulative] : scaled) {
      if (point < cumulative) {
        chosen_ordinal = ord;
        break;
      }
    }
  }

  if (!r.empty) {
    r.answer_subset = f.universe()->subset_ids(f.universe()->subset_mask(chosen_ordinal));
  }
  EncodeResult enc = encode(*f.universe(), r.answer_subset, opts);
  r.truncated = enc.truncated;
  r.wire = std::move(enc.wire);
  for (const std::string& id : enc.encoded_ids) {
    ++r.steps_used;
    const Candidate& cand = f.universe()->candidates()[f.universe()->candidate_index(id)];
    r.ttl = r.rrsets.empty() ? cand.ttl() : std::min(r.ttl, cand.ttl());
    r.rrsets.push_back(cand);
  }
  return r;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

CacheCheckResult cache_consistency_check(const std::function<ServedResponse()>& server,
                                         std::size_t repeats) {
  CacheCheckResult result;
  if (repeats == 0) {
    throw Error(ErrorKind::InvalidInput, "cache check needs at least one repeat");
  }
  const ServedResponse first = server();
  for (std::size_t i = 1; i < repeats; ++i) {
    if (server().wire != first.wire) {
      result.first_divergence = i;
      return result;
    }
  }
  result.pass = true;
  return result;
}

CacheCheckResult cache_consistency_check(const Behavior& f, const QueryContext& c,
                                         std::size_t repeats) {
  return cache_consistency_check(
      [&] { return serve(f, c, ServeMode::Deterministic); }, repeats);
}

bool CacheProbe::consistent() const {
  for (const ServedResponse& r : observations) {
    if (r.wire != observations.front().wire) return false;
  }
  return true;
}

CacheProbe probe_cache(const Behavior& f, const QueryContext& c, std::uint32_t window_seconds,
                       std::size_t repeats) {
  CacheProbe probe{c, window_seconds, {}};
  for (std::size_t i = 0; i < repeats; ++i) {
    probe.observations.push_back(serve(f, c, ServeMode::Deterministic));
  }
  return probe;
}

}  // namespace steerlab
