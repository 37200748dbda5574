#pragma once

// Lewis-Payne generalized feedback shift register generator and the
// distribution abstraction behind every DISTx parameter.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ocb {

inline constexpr std::uint64_t kDefaultSeed = 1868;

// x[k] = x[k - kLag] ^ x[k - kTap] over 32-bit words. The trinomial
// x^98 + x^27 + 1 is primitive, so the bit columns have period 2^98 - 1.
struct GfsrConstants {
  static constexpr std::size_t kLag = 98;
  static constexpr std::size_t kTap = 27;
  static constexpr unsigned kWordBits = 32;
  static constexpr std::size_t kWarmup = 5000;
};

class RandomState {
 public:
  // Fills the register from a splitmix64 stream of `seed` and discards
  // GfsrConstants::kWarmup outputs.
  explicit RandomState(std::uint64_t seed = kDefaultSeed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint32_t next_u32() noexcept;

  // Uniform integer in [low, high], rejection sampled (no modulo bias).
  // Throws RangeError when low > high.
  std::int64_t next_int(std::int64_t low, std::int64_t high);

  // Uniform in [0, 1) built from exactly one register word.
  double next_unit() noexcept { return next_u32() * 0x1.0p-32; }

  friend bool operator==(const RandomState&, const RandomState&) = default;

 private:
  std::uint64_t seed_;
  std::array<std::uint32_t, GfsrConstants::kLag> register_{};
  std::size_t position_ = 0;
};

inline RandomState seed_state(std::uint64_t seed) { return RandomState(seed); }

// Independent per-stream seed derived from a base seed (clients, replicates).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

class Distribution {
 public:
  enum class Kind { kUniform, kConstant };

  // One entry of a constant assignment table: `value` repeated `count` times.
  // The table cycles when the lookup key exceeds its total length.
  struct Run {
    std::int64_t value = 0;
    std::int64_t count = 1;
    friend bool operator==(const Run&, const Run&) = default;
  };

  // Uniform over the domain supplied by the caller.
  static Distribution uniform() { return Distribution(Kind::kUniform); }
  // Uniform over a fixed inclusive range. Throws RangeError when low > high.
  static Distribution uniform(std::int64_t low, std::int64_t high);
  static Distribution constant(std::int64_t value);
  static Distribution table(std::vector<Run> runs);

  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::kConstant; }
  const std::optional<std::pair<std::int64_t, std::int64_t>>& range() const noexcept {
    return range_;
  }
  const std::vector<Run>& runs() const noexcept { return runs_; }

  // Table lookup for constant distributions.
  std::int64_t constant_at(std::uint64_t key) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<std::pair<std::int64_t, std::int64_t>> range_;
  std::vector<Run> runs_;
  std::int64_t table_length_ = 0;
};

// Uniform: draws from the distribution's own range when set, otherwise from
// [domain_low, domain_high]. Constant: returns the table entry for `key` and
// leaves `state` untouched.
std::int64_t sample(const Distribution& dist, RandomState& state, std::int64_t domain_low,
                    std::int64_t domain_high, std::uint64_t key = 0);

// For distributions that carry their own range or are constant.
std::int64_t sample(const Distribution& dist, RandomState& state);

}  // namespace ocb
