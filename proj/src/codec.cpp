// Copyright 2026 The Varco Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "varco/codec.hpp"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "varco/error.hpp"

namespace varco {
namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw Error("libsodium initialization failed");
}

constexpr std::string_view kIndexTag = "varco.idx.v1";
constexpr std::string_view kDigestTag = "varco.dig.v1";

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::vector<std::uint8_t> context_bytes(std::string_view tag, const KeyContext& ctx,
                                        bool with_direction) {
  std::vector<std::uint8_t> out(tag.begin(), tag.end());
  append_u32(out, ctx.epoch);
  append_u32(out, ctx.layer);
  append_u32(out, ctx.hop);
  append_u32(out, ctx.source);
  append_u32(out, ctx.destination);
  append_u32(out, ctx.node);
  if (with_direction) out.push_back(static_cast<std::uint8_t>(ctx.direction));
  return out;
}

// ChaCha20 keystream consumed as little-endian 64-bit words.
class KeyStream {
 public:
  explicit KeyStream(const std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES>& key)
      : key_(key) {}

  std::uint64_t next() {
    if (pos_ == block_.size()) refill();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(block_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  void refill() {
    static constexpr std::array<std::uint8_t, 64> zeros{};
    static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
    crypto_stream_chacha20_xor_ic(block_.data(), zeros.data(), zeros.size(), nonce.data(),
                                  counter_++, key_.data());
    pos_ = 0;
  }

  std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES> key_;
  std::array<std::uint8_t, 64> block_{};
  std::size_t pos_ = 64;
  std::uint64_t counter_ = 0;
};

void check_ratio(double ratio) {
  if (!(ratio >= 1.0) || !std::isfinite(ratio)) {
    throw InvalidArgument("compression ratio must be a finite value >= 1, got " +
                          std::to_string(ratio));
  }
}

}  // namespace

MasterKey MasterKey::from_seed(std::uint64_t seed) {
  ensure_sodium();
  std::array<std::uint8_t, 8> le{};
  for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  MasterKey k;
  crypto_generichash(k.bytes.data(), k.bytes.size(), le.data(), le.size(), nullptr, 0);
  return k;
}

MasterKey MasterKey::from_hex(std::string_view hex) {
  ensure_sodium();
  MasterKey k;
  std::size_t written = 0;
  const char* end = nullptr;
  if (hex.size() != 32 ||
      sodium_hex2bin(k.bytes.data(), k.bytes.size(), hex.data(), hex.size(), nullptr, &written,
                     &end) != 0 ||
      written != k.bytes.size()) {
    throw InvalidArgument("master key must be 32 hex characters");
  }
  return k;
}

std::uint32_t kept_count(std::uint32_t orig_len, double ratio) {
  check_ratio(ratio);
  if (orig_len == 0) return 0;
  const double target = std::round(static_cast<double>(orig_len) / ratio);
  return static_cast<std::uint32_t>(std::clamp(target, 1.0, static_cast<double>(orig_len)));
}

double expected_error(std::span<const double> x, double ratio) {
  if (x.empty()) return 0.0;
  const auto n = static_cast<std::uint32_t>(x.size());
  const double keep_fraction = static_cast<double>(kept_count(n, ratio)) / n;
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return (1.0 - keep_fraction) * sq;
}

Codec::Codec(MasterKey key, CodecOptions options) : key_(key), options_(options) {
  ensure_sodium();
}

std::vector<std::uint32_t> Codec::derive_indices(const KeyContext& ctx, std::uint32_t orig_len,
                                                 std::uint32_t kept) const {
  if (kept > orig_len) {
    throw InvalidArgument("cannot keep " + std::to_string(kept) + " of " +
                          std::to_string(orig_len) + " entries");
  }
  std::vector<std::uint32_t> positions(orig_len);
  std::iota(positions.begin(), positions.end(), 0u);
  if (kept == orig_len) return positions;

  const auto msg = context_bytes(kIndexTag, ctx, false);
  std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES> subkey{};
  crypto_generichash(subkey.data(), subkey.size(), msg.data(), msg.size(), key_.bytes.data(),
                     key_.bytes.size());
  KeyStream stream(subkey);
  for (std::uint32_t i = 0; i < kept; ++i) {
    const auto j = i + static_cast<std::uint32_t>(stream.below(orig_len - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(kept);
  std::sort(positions.begin(), positions.end());
  return positions;
}

ContextDigest Codec::digest(const KeyContext& ctx) const {
  const auto msg = context_bytes(kDigestTag, ctx, true);
  ContextDigest d{};
  crypto_generichash(d.data(), d.size(), msg.data(), msg.size(), key_.bytes.data(),
                     key_.bytes.size());
  return d;
}

CompressedBlock Codec::encode(std::span<const double> x, std::span<const std::uint32_t> indices,
                              double ratio, const KeyContext& ctx) const {
  if (x.empty()) throw InvalidArgument("cannot compress an empty vector");
  CompressedBlock b;
  b.ratio = ratio;
  b.orig_len = static_cast<std::uint32_t>(x.size());
  b.kept = static_cast<std::uint32_t>(indices.size());
  b.values.resize(indices.size());
  const double scale = options_.unbiased ? static_cast<double>(b.orig_len) / b.kept : 1.0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= x.size()) throw InvalidArgument("kept position out of range");
    b.values[i] = options_.unbiased ? x[indices[i]] * scale : x[indices[i]];
  }
  b.key = digest(ctx);
  return b;
}

void Codec::decode_into(const CompressedBlock& block, std::span<const std::uint32_t> indices,
                        const KeyContext& ctx, std::span<double> out) const {
  if (block.values.size() != block.kept || block.kept != indices.size() ||
      block.kept > block.orig_len || block.kept == 0) {
    throw CorruptBlock("block declares " + std::to_string(block.kept) + " kept of " +
                       std::to_string(block.orig_len) + " but carries " +
                       std::to_string(block.values.size()) + " values");
  }
  if (out.size() != block.orig_len) {
    throw CorruptBlock("block length " + std::to_string(block.orig_len) +
                       " does not match destination length " + std::to_string(out.size()));
  }
  if (block.key != digest(ctx)) throw CorruptBlock("block digest does not match its context");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = block.values[i];
}

CompressedBlock Codec::compress(std::span<const double> x, double ratio,
                                const KeyContext& ctx) const {
  if (x.empty()) throw InvalidArgument("cannot compress an empty vector");
  const auto n = static_cast<std::uint32_t>(x.size());
  const auto indices = derive_indices(ctx, n, kept_count(n, ratio));
  return encode(x, indices, ratio, ctx);
}

std::vector<double> Codec::decompress(const CompressedBlock& block, const KeyContext& ctx) const {
  if (block.values.size() != block.kept || block.kept > block.orig_len || block.kept == 0) {
    throw CorruptBlock("block declares " + std::to_string(block.kept) + " kept of " +
                       std::to_string(block.orig_len) + " but carries " +
                       std::to_string(block.values.size()) + " values");
  }
  const auto indices = derive_indices(ctx, block.orig_len, block.kept);
  std::vector<double> out(block.orig_len);
  decode_into(block, indices, ctx, out);
  return out;
}

CompressedBlock Codec::codec_backward(std::span<const double> upstream,
                                      const KeyContext& forward_ctx, std::uint32_t orig_len,
                                      std::uint32_t kept) const {
  if (upstream.size() != orig_len) {
    throw ShapeMismatch("upstream gradient has " + std::to_string(upstream.size()) +
                        " entries, exchange carried " + std::to_string(orig_len));
  }
  if (forward_ctx.direction != Direction::forward) {
    throw InvalidArgument("codec_backward expects the forward exchange context");
  }
  const auto indices = derive_indices(forward_ctx, orig_len, kept);
  KeyContext back = forward_ctx;
  back.direction = Direction::backward;
  return encode(upstream, indices, static_cast<double>(orig_len) / kept, back);
}

std::vector<std::uint8_t> encode_wire(const CompressedBlock& block) {
  if (block.values.size() != block.kept) throw CorruptBlock("kept does not match value count");
  std::vector<std::uint8_t> out;
  out.reserve(kWireHeaderBytes + 4 * block.kept);
  out.insert(out.end(), block.key.begin(), block.key.end());
  append_u32(out, block.orig_len);
  append_u32(out, block.kept);
  for (double v : block.values) append_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

CompressedBlock decode_wire(std::span<const std::uint8_t> bytes) {
  auto u32_at = [&](std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    return v;
  };
  if (bytes.size() < kWireHeaderBytes) throw CorruptBlock("wire block shorter than its header");
  CompressedBlock b;
  std::copy_n(bytes.begin(), b.key.size(), b.key.begin());
  b.orig_len = u32_at(16);
  b.kept = u32_at(20);
  if (b.kept == 0 || b.kept > b.orig_len) throw CorruptBlock("wire block has invalid kept count");
  if (bytes.size() != kWireHeaderBytes + 4 * static_cast<std::size_t>(b.kept)) {
    throw CorruptBlock("wire block payload size does not match kept count");
  }
  b.values.resize(b.kept);
  for (std::uint32_t i = 0; i < b.kept; ++i) {
    b.values[i] = static_cast<double>(std::bit_cast<float>(u32_at(kWireHeaderBytes + 4 * i)));
  }
  b.ratio = static_cast<double>(b.orig_len) / b.kept;
  return b;
}

}  // namespace varco
