#pragma once

#include <array>
#include <cstdint>

namespace lcdlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A stream is the pair (key, stream index); draws walk the low 64 bits of
// the counter, so distinct indices never share a counter block.
class Stream {
 public:
  Stream(std::uint64_t key, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

struct SeedSpec {
  std::uint64_t master_seed = 0;

  Stream substream(std::uint64_t index) const { return Stream(splitmix64(master_seed), index); }
  // Independent seed family for a named purpose (e.g. matrix vs vector draws).
  SeedSpec child(std::uint64_t tag) const {
    return SeedSpec{splitmix64(master_seed ^ splitmix64(tag + 0x632be59bd9b4e019ULL))};
  }
};

}  // namespace lcdlab
