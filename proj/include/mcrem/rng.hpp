#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace mcrem {

/// Philox4x32-10 counter-based block function.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      std::uint64_t const p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      std::uint64_t const p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
      auto const lo0 = static_cast<std::uint32_t>(p0);
      auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
      auto const lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// Independent random stream for one (seed, pole, replicate) triple.
/// The draw sequence depends only on that triple, never on scheduling.
class WalkRng {
 public:
  WalkRng(std::uint64_t seed, std::uint32_t pole, std::uint64_t replicate) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        pole_(pole),
        replicate_(replicate) {}

  std::uint32_t pole() const noexcept { return pole_; }
  std::uint64_t replicate() const noexcept { return replicate_; }

  std::uint32_t next_u32() noexcept {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    std::uint64_t const hi = next_u32();
    std::uint64_t const lo = next_u32();
    std::uint64_t const bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal deviate by the Box-Muller transform.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double const r = std::sqrt(-2.0 * std::log(uniform()));
    double const theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  void refill() noexcept {
    Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_++), pole_,
                            static_cast<std::uint32_t>(replicate_),
                            static_cast<std::uint32_t>(replicate_ >> 32)};
    buffer_ = Philox4x32::block(ctr, key_);
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t pole_;
  std::uint64_t replicate_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mcrem
