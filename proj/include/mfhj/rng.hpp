#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfhj {

// Counter-based stream. Draw k of a stream is a pure function of
// (master_seed, label, index, k), so results do not depend on the order in
// which streams are consumed or on how work is split across threads.
//
// Distributions are implemented here rather than with <random> adaptors
// because the standard ones are not specified bit-for-bit across library
// implementations.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string label, std::uint64_t index = 0);

  std::uint64_t master_seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t index() const { return index_; }
  std::uint64_t counter() const { return counter_; }

  // Independent stream for sub-task `i` (e.g. replica or tree node id).
  RngStream substream(std::uint64_t i) const;

  std::uint64_t next_u64();
  // Uniform on the open interval (0,1), 53-bit resolution.
  double uniform();
  double normal();
  double exponential();
  std::uint64_t poisson(double mean);

 private:
  RngStream(std::uint64_t seed, std::string label, std::uint64_t index, std::uint64_t key);

  std::uint64_t seed_;
  std::string label_;
  std::uint64_t index_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<double> rng_draw_gaussian(RngStream& stream, std::size_t n);

// SplitMix64 finalizer; exposed for hashing node ids and labels.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(const std::string& text);

}  // namespace mfhj
