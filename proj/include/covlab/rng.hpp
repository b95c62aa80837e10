#pragma once

#include <array>
#include <cstdint>

namespace covlab {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure: the output depends only on counter and key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The key is the seed and the high half of the
/// counter is the stream id, so (seed, stream_id) fixes the whole sequence and
/// distinct stream ids never share a Philox block.
///
/// A stream is a small mutable value; copy it to fork an identical sequence,
/// and never share one instance between threads.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream for sub-task `index`; deterministic in (this stream id, index).
    RngStream split(std::uint64_t index) const;

    /// Stream for worker/block `index` of experiment `experiment_id`.
    static RngStream derive(std::uint64_t seed, std::uint64_t experiment_id, std::uint64_t index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_pos();
    /// Standard normal by Box-Muller; the second variate of each pair is cached.
    double normal();

    friend bool operator==(const RngStream&, const RngStream&) = default;

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace covlab
