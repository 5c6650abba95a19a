#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "logdos/ids.hpp"

namespace logdos {

/// False-positive probability of a Bloom filter with `bits` bits and
/// `hash_count` probes after `inserted` insertions, exact product form
/// (1 - (1 - 1/m)^{kj})^k. Throws std::domain_error if m or k is zero.
double fp_probability(std::uint64_t bits, unsigned hash_count, std::uint64_t inserted);

/// Exponential approximation (1 - e^{-kj/m})^k.
double fp_probability_approx(std::uint64_t bits, unsigned hash_count, std::uint64_t inserted);

/// Smallest bit count for which the approximate false-positive rate is at
/// most `target_fp` after `capacity` insertions:
/// ceil(k n / -ln(1 - p^{1/k})).
std::uint64_t size_for(std::uint64_t capacity, double target_fp, unsigned hash_count);

/// Plain Bloom filter over 128-bit digests. Probe positions use double
/// hashing, position_i = (h1 + i*h2) mod m with h2 odd, where h1 and h2 are
/// seeded mixes of the two digest halves.
class BloomFilter {
 public:
  BloomFilter(std::uint64_t bits, unsigned hash_count, std::uint64_t capacity,
              std::uint64_t seed);

  void insert(const Digest& d);
  [[nodiscard]] bool contains(const Digest& d) const;
  void reset();

  [[nodiscard]] std::uint64_t bit_count() const { return bits_; }
  [[nodiscard]] unsigned hash_count() const { return hash_count_; }
  [[nodiscard]] std::uint64_t inserted() const { return inserted_; }
  [[nodiscard]] std::uint64_t capacity() const { return capacity_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] bool saturated() const { return inserted_ >= capacity_; }
  [[nodiscard]] std::uint64_t popcount() const;
  [[nodiscard]] const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  template <typename F>
  void for_each_position(const Digest& d, F&& f) const;

  std::uint64_t bits_;
  unsigned hash_count_;
  std::uint64_t capacity_;
  std::uint64_t seed_;
  std::uint64_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Two filters used in rotation. Inserts go to the active filter; once it
/// holds `capacity` insertions the other filter is cleared and becomes
/// active. Queries consult both, so the most recent `capacity` insertions
/// are always present.
class RotatingFilterPair {
 public:
  RotatingFilterPair(std::uint64_t bits, unsigned hash_count, std::uint64_t capacity,
                     std::uint64_t seed);

  /// Pair whose filters are sized with size_for(capacity, target_fp, hash_count).
  static RotatingFilterPair sized_for(std::uint64_t capacity, double target_fp,
                                      unsigned hash_count, std::uint64_t seed);

  void insert(const Digest& d);
  [[nodiscard]] bool contains(const Digest& d) const;
  void reset();

  [[nodiscard]] int active() const { return active_; }
  [[nodiscard]] const BloomFilter& filter(int index) const { return filters_.at(index); }
  [[nodiscard]] std::uint64_t storage_bits() const;

 private:
  std::array<BloomFilter, 2> filters_;
  int active_ = 0;
};

}  // namespace logdos
