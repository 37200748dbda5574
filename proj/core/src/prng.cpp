#include "ocb/prng.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "ocb/error.hpp"

namespace ocb {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomState::RandomState(std::uint64_t seed) : seed_(seed) {
  std::uint64_t mix = seed;
  bool any_set = false;
  for (auto& word : register_) {
    word = static_cast<std::uint32_t>(splitmix64(mix) >> 32);
    any_set = any_set || word != 0;
  }
  if (!any_set) register_[0] = 1;  // the all-zero register is a fixed point
  for (std::size_t i = 0; i < GfsrConstants::kWarmup; ++i) next_u32();
}

std::uint32_t RandomState::next_u32() noexcept {
  constexpr std::size_t kLag = GfsrConstants::kLag;
  // register_[position_] holds x[k - kLag]; x[k - kTap] sits kLag - kTap ahead.
  const std::size_t tap = (position_ + kLag - GfsrConstants::kTap) % kLag;
  const std::uint32_t out = register_[position_] ^ register_[tap];
  register_[position_] = out;
  position_ = position_ + 1 == kLag ? 0 : position_ + 1;
  return out;
}

std::int64_t RandomState::next_int(std::int64_t low, std::int64_t high) {
  if (low > high) {
    throw RangeError("invalid range [" + std::to_string(low) + ", " + std::to_string(high) + "]");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(high) - static_cast<std::uint64_t>(low);
  if (span == 0) return low;
  std::uint64_t draw;
  if (span < std::numeric_limits<std::uint32_t>::max()) {
    const std::uint64_t buckets = span + 1;
    const std::uint64_t limit = (std::uint64_t{1} << 32) / buckets * buckets;
    do {
      draw = next_u32();
    } while (draw >= limit);
    draw %= buckets;
  } else {
    const auto next64 = [this] {
      return (static_cast<std::uint64_t>(next_u32()) << 32) | next_u32();
    };
    if (span == std::numeric_limits<std::uint64_t>::max()) {
      draw = next64();
    } else {
      const std::uint64_t buckets = span + 1;
      const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / buckets * buckets;
      do {
        draw = next64();
      } while (draw >= limit);
      draw %= buckets;
    }
  }
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(low) + draw);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t x = base ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return splitmix64(x);
}

Distribution Distribution::uniform(std::int64_t low, std::int64_t high) {
  if (low > high) {
    throw RangeError("uniform distribution with empty range [" + std::to_string(low) + ", " +
                     std::to_string(high) + "]");
  }
  Distribution d(Kind::kUniform);
  d.range_ = std::make_pair(low, high);
  return d;
}

Distribution Distribution::constant(std::int64_t value) { return table({{value, 1}}); }

Distribution Distribution::table(std::vector<Run> runs) {
  if (runs.empty()) throw RangeError("constant distribution needs at least one value");
  std::int64_t total = 0;
  for (const auto& run : runs) {
    if (run.count < 1) throw RangeError("constant table run count must be >= 1");
    total += run.count;
  }
  Distribution d(Kind::kConstant);
  d.runs_ = std::move(runs);
  d.table_length_ = total;
  return d;
}

std::int64_t Distribution::constant_at(std::uint64_t key) const {
  if (runs_.size() == 1) return runs_.front().value;
  auto pos = static_cast<std::int64_t>(key % static_cast<std::uint64_t>(table_length_));
  for (const auto& run : runs_) {
    if (pos < run.count) return run.value;
    pos -= run.count;
  }
  return runs_.back().value;
}

std::int64_t sample(const Distribution& dist, RandomState& state, std::int64_t domain_low,
                    std::int64_t domain_high, std::uint64_t key) {
  if (dist.is_constant()) return dist.constant_at(key);
  if (dist.range()) return state.next_int(dist.range()->first, dist.range()->second);
  return state.next_int(domain_low, domain_high);
}

std::int64_t sample(const Distribution& dist, RandomState& state) {
  if (!dist.is_constant() && !dist.range()) {
    throw RangeError("uniform distribution has no range and no domain was supplied");
  }
  return sample(dist, state, 0, 0);
}

}  // namespace ocb
