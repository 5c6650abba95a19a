#include "logdos/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "logdos/rng.hpp"

namespace logdos {

namespace {

void check_shape(std::uint64_t bits, unsigned hash_count) {
  if (bits == 0) throw std::domain_error("bloom filter needs at least one bit");
  if (hash_count == 0) throw std::domain_error("bloom filter needs at least one hash");
}

}  // namespace

double fp_probability(std::uint64_t bits, unsigned hash_count, std::uint64_t inserted) {
  check_shape(bits, hash_count);
  if (inserted == 0) return 0.0;
  if (bits == 1) return 1.0;
  const double probes = static_cast<double>(hash_count) * static_cast<double>(inserted);
  // 1 - (1 - 1/m)^{kj}, evaluated without cancellation.
  const double fill = -std::expm1(probes * std::log1p(-1.0 / static_cast<double>(bits)));
  return std::pow(fill, hash_count);
}

double fp_probability_approx(std::uint64_t bits, unsigned hash_count, std::uint64_t inserted) {
  check_shape(bits, hash_count);
  const double probes = static_cast<double>(hash_count) * static_cast<double>(inserted);
  const double fill = -std::expm1(-probes / static_cast<double>(bits));
  return std::pow(fill, hash_count);
}

std::uint64_t size_for(std::uint64_t capacity, double target_fp, unsigned hash_count) {
  if (capacity == 0) throw std::domain_error("size_for: capacity must be >= 1");
  if (hash_count == 0) throw std::domain_error("size_for: hash_count must be >= 1");
  if (!(target_fp > 0.0 && target_fp < 1.0))
    throw std::domain_error("size_for: target false-positive rate must be in (0, 1)");
  const double root = std::pow(target_fp, 1.0 / hash_count);
  if (!(root < 1.0)) throw std::domain_error("size_for: target unreachable");
  const double bits = static_cast<double>(hash_count) * static_cast<double>(capacity) /
                      -std::log1p(-root);
  return static_cast<std::uint64_t>(std::ceil(bits));
}

BloomFilter::BloomFilter(std::uint64_t bits, unsigned hash_count, std::uint64_t capacity,
                         std::uint64_t seed)
    : bits_(bits), hash_count_(hash_count), capacity_(capacity), seed_(seed) {
  check_shape(bits, hash_count);
  if (bits >= (std::uint64_t{1} << 62)) throw std::domain_error("bloom filter too large");
  words_.assign((bits + 63) / 64, 0);
}

template <typename F>
void BloomFilter::for_each_position(const Digest& d, F&& f) const {
  const std::uint64_t h1 = mix64(d.lo ^ seed_);
  const std::uint64_t h2 = mix64(d.hi ^ std::rotl(seed_, 32) ^ 0x2545f4914f6cdd1dULL) | 1;
  std::uint64_t pos = h1 % bits_;
  const std::uint64_t step = h2 % bits_;
  for (unsigned i = 0; i < hash_count_; ++i) {
    f(pos);
    pos += step;
    if (pos >= bits_) pos -= bits_;
  }
}

void BloomFilter::insert(const Digest& d) {
  for_each_position(d, [this](std::uint64_t pos) {
    words_[pos >> 6] |= std::uint64_t{1} << (pos & 63);
  });
  ++inserted_;
}

bool BloomFilter::contains(const Digest& d) const {
  bool present = true;
  for_each_position(d, [&](std::uint64_t pos) {
    present = present && ((words_[pos >> 6] >> (pos & 63)) & 1);
  });
  return present;
}

void BloomFilter::reset() {
  std::fill(words_.begin(), words_.end(), 0);
  inserted_ = 0;
}

std::uint64_t BloomFilter::popcount() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

RotatingFilterPair::RotatingFilterPair(std::uint64_t bits, unsigned hash_count,
                                       std::uint64_t capacity, std::uint64_t seed)
    : filters_{BloomFilter(bits, hash_count, capacity, seed),
               BloomFilter(bits, hash_count, capacity, mix64(seed ^ 0xa0761d6478bd642fULL))} {
  if (capacity == 0) throw std::domain_error("rotating filter capacity must be >= 1");
}

RotatingFilterPair RotatingFilterPair::sized_for(std::uint64_t capacity, double target_fp,
                                                 unsigned hash_count, std::uint64_t seed) {
  return RotatingFilterPair(size_for(capacity, target_fp, hash_count), hash_count, capacity,
                            seed);
}

void RotatingFilterPair::insert(const Digest& d) {
  BloomFilter& current = filters_[active_];
  current.insert(d);
  if (current.saturated()) {
    active_ = 1 - active_;
    filters_[active_].reset();
  }
}

bool RotatingFilterPair::contains(const Digest& d) const {
  return filters_[0].contains(d) || filters_[1].contains(d);
}

void RotatingFilterPair::reset() {
  filters_[0].reset();
  filters_[1].reset();
  active_ = 0;
}

std::uint64_t RotatingFilterPair::storage_bits() const {
  return filters_[0].bit_count() + filters_[1].bit_count();
}

}  // namespace logdos
