#pragma once

#include <array>
#include <cstdint>

namespace tailidx {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit counter is split into a 64-bit block index and a 64-bit
/// stream index, so distinct stream indices never share a counter value and
/// substreams cannot overlap. The key is the 64-bit master seed.
class philox4x32 {
public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr counter_type block(counter_type ctr, key_type key) noexcept {
    ctr = round(ctr, key);
    for (int r = 1; r < 10; ++r) {
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
      ctr = round(ctr, key);
    }
    return ctr;
  }

private:
  static constexpr counter_type round(const counter_type& ctr,
                                      const key_type& key) noexcept {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
};

/// Sequential view of one Philox substream yielding uniforms on (0, 1).
class uniform_stream {
public:
  uniform_stream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : key_{static_cast<std::uint32_t>(master_seed),
           static_cast<std::uint32_t>(master_seed >> 32)},
      stream_{stream_index} {
  }

  /// Next raw 64-bit word.
  std::uint64_t next_u64() noexcept {
    if (pos_ == 2) {
      refill();
    }
    return words_[pos_++];
  }

  /// Uniform on the open interval: (j + 1/2) / 2^52 for a 52-bit integer j.
  /// Never returns 0 or 1.
  double next_open01() noexcept {
    const auto j = next_u64() >> 12;
    return (static_cast<double>(j) + 0.5) * 0x1p-52;
  }

private:
  void refill() noexcept {
    const philox4x32::counter_type ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = philox4x32::block(ctr, key_);
    words_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    words_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++block_;
    pos_ = 0;
  }

  philox4x32::key_type key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int pos_ = 2;
};

} // namespace tailidx
