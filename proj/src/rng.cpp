#include "mfhj/rng.hpp"

#include <cmath>
#include <numbers>

namespace mfhj {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t derive_key(std::uint64_t seed, const std::string& label, std::uint64_t index) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ fnv1a64(label));
  return mix64(k ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string label, std::uint64_t index)
    : seed_(master_seed), label_(std::move(label)), index_(index),
      key_(derive_key(master_seed, label_, index)) {}

RngStream::RngStream(std::uint64_t seed, std::string label, std::uint64_t index, std::uint64_t key)
    : seed_(seed), label_(std::move(label)), index_(index), key_(key) {}

RngStream RngStream::substream(std::uint64_t i) const {
  return RngStream(seed_, label_, index_, mix64(key_ ^ mix64(i + 0x2545f4914f6cdd1dULL)));
}

std::uint64_t RngStream::next_u64() {
  // Two rounds so that neighbouring counters under one key decorrelate fully.
  std::uint64_t c = counter_++;
  return mix64(key_ ^ mix64(c * 0x9e3779b97f4a7c15ULL + 1));
}

double RngStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double RngStream::exponential() { return -std::log(uniform()); }

std::uint64_t RngStream::poisson(double mean) {
  // Inversion on chunks of mean <= 16; sums of independent Poissons are Poisson.
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double m = std::min(mean, 16.0);
    mean -= m;
    const double u = uniform();
    double p = std::exp(-m);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= m / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

std::vector<double> rng_draw_gaussian(RngStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = stream.normal();
  return out;
}

}  // namespace mfhj
