#include "logdos/messages.hpp"

#include <array>

#include <sodium.h>

namespace logdos {

namespace {

void put_be64(unsigned char* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<unsigned char>(v & 0xff);
    v >>= 8;
  }
}

std::uint64_t get_be64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

Digest digest_of(const ServiceId& sid, std::span<const PathId> prefix, std::uint64_t run_seed) {
  static_assert(crypto_generichash_KEYBYTES_MIN <= 16);
  [[maybe_unused]] static const int sodium_ready = sodium_init();

  std::array<unsigned char, 16> key{};
  put_be64(key.data(), run_seed);

  thread_local std::vector<unsigned char> buf;
  buf.resize(20 + 8 * prefix.size());
  put_be64(buf.data(), sid.hi);
  put_be64(buf.data() + 8, sid.lo);
  const auto len = static_cast<std::uint32_t>(prefix.size());
  buf[16] = static_cast<unsigned char>(len >> 24);
  buf[17] = static_cast<unsigned char>(len >> 16);
  buf[18] = static_cast<unsigned char>(len >> 8);
  buf[19] = static_cast<unsigned char>(len);
  for (std::size_t i = 0; i < prefix.size(); ++i) put_be64(buf.data() + 20 + 8 * i, prefix[i].value);

  std::array<unsigned char, 16> out{};
  crypto_generichash(out.data(), out.size(), buf.data(), buf.size(), key.data(), key.size());
  return Digest{get_be64(out.data()), get_be64(out.data() + 8)};
}

void forward_append(GetMessage& msg, PathId pid) { msg.pids.push_back(pid); }

PathId return_strip(DataMessage& msg) {
  if (msg.pids.empty()) throw MalformedPacket("DATA message has no path identifiers left");
  const PathId last = msg.pids.back();
  msg.pids.pop_back();
  return last;
}

}  // namespace logdos
