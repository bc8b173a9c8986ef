#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace latgeo {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
/// Output is a pure function of (counter, key), which is what lets Monte
/// Carlo blocks be evaluated in any order or on any thread.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Mixes a parent seed with a tag into an independent child seed (splitmix64
/// finalizer). Used to give experiments and sub-experiments their own streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Sequential reader over the Philox stream identified by (seed, stream).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound), bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  void fill_normal(std::span<double> out);

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace latgeo
