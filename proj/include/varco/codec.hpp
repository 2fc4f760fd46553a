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

#pragma once

// Random-subset activation codec.
//
// A vector of length n is compressed at ratio r by keeping
// kept = clamp(round(n / r), 1, n) entries at positions drawn uniformly
// without replacement; the decoder writes them back and zero-fills the rest.
// Positions are never transmitted: encoder and decoder derive them from a
// shared 128-bit master key and the exchange's KeyContext.
//
// Index derivation (stable, defines wire compatibility):
//   ctx_bytes = u32 epoch | u32 layer | u32 hop | u32 source | u32 destination
//               | u32 node   (all little-endian)
//   subkey    = BLAKE2b-256(key = master, msg = "varco.idx.v1" | ctx_bytes)
//   stream    = ChaCha20 keystream (original 64-bit nonce variant, nonce = 0,
//               block counter from 0) read as little-endian u64 words
//   positions = partial Fisher-Yates over [0, n): for i in [0, kept),
//               swap(i, i + draw(n - i)) where draw(b) rejects words below
//               (2^64 - b) mod b and returns word mod b; the first `kept`
//               positions, sorted ascending.
// The direction flag is excluded, so a backward message reuses the forward
// mask of the same exchange. It is included in the block digest:
//   digest    = BLAKE2b-128(key = master, msg = "varco.dig.v1" | ctx_bytes | u8 direction)

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "varco/types.hpp"

namespace varco {

struct MasterKey {
  std::array<std::uint8_t, 16> bytes{};

  // BLAKE2b-128 of the seed's little-endian bytes.
  static MasterKey from_seed(std::uint64_t seed);
  // 32 hex characters.
  static MasterKey from_hex(std::string_view hex);
  bool operator==(const MasterKey&) const = default;
};

enum class Direction : std::uint8_t { forward = 0, backward = 1 };

// Identifies one node-vector exchange. `source`/`destination` always name the
// forward direction (owner -> consumer), also for backward messages.
struct KeyContext {
  std::uint32_t epoch = 0;
  std::uint32_t layer = 0;
  std::uint32_t hop = 0;
  WorkerId source = 0;
  WorkerId destination = 0;
  NodeId node = 0;
  Direction direction = Direction::forward;
};

using ContextDigest = std::array<std::uint8_t, 16>;

struct CompressedBlock {
  double ratio = 1.0;
  std::uint32_t orig_len = 0;
  std::uint32_t kept = 0;
  std::vector<double> values;  // kept entries in ascending position order
  ContextDigest key{};
};

// clamp(round(orig_len / ratio), 1, orig_len); ratio >= 1.
std::uint32_t kept_count(std::uint32_t orig_len, double ratio);

// (1 - kept/n) * ||x||^2: the exact expectation of ||x~ - x||^2 under uniform
// random zero-fill without rescaling.
double expected_error(std::span<const double> x, double ratio);

struct CodecOptions {
  // Scale kept entries by orig_len / kept so the decoded vector is unbiased.
  bool unbiased = false;
};

class Codec {
 public:
  explicit Codec(MasterKey key, CodecOptions options = {});

  const MasterKey& key() const { return key_; }
  const CodecOptions& options() const { return options_; }

  // Sorted positions kept for this context.
  std::vector<std::uint32_t> derive_indices(const KeyContext& ctx, std::uint32_t orig_len,
                                            std::uint32_t kept) const;
  ContextDigest digest(const KeyContext& ctx) const;

  CompressedBlock compress(std::span<const double> x, double ratio, const KeyContext& ctx) const;
  std::vector<double> decompress(const CompressedBlock& block, const KeyContext& ctx) const;

  // Gradient of decompress(compress(x)) applied to `upstream`: entries at the
  // forward mask pass through, the rest are dropped. Returned as the block
  // that travels back to the owner. `forward_ctx` is the forward exchange's
  // context; the block digest is taken with the backward direction flag.
  CompressedBlock codec_backward(std::span<const double> upstream, const KeyContext& forward_ctx,
                                 std::uint32_t orig_len, std::uint32_t kept) const;

  // Variants that take positions already derived for the same context, so an
  // exchange derives them once per side.
  CompressedBlock encode(std::span<const double> x, std::span<const std::uint32_t> indices,
                         double ratio, const KeyContext& ctx) const;
  void decode_into(const CompressedBlock& block, std::span<const std::uint32_t> indices,
                   const KeyContext& ctx, std::span<double> out) const;

 private:
  MasterKey key_;
  CodecOptions options_;
};

// Wire layout: 16-byte digest, u32 orig_len, u32 kept, kept x float32, all
// little-endian. Values are narrowed to float32 here.
std::vector<std::uint8_t> encode_wire(const CompressedBlock& block);
CompressedBlock decode_wire(std::span<const std::uint8_t> bytes);
constexpr std::size_t kWireHeaderBytes = 24;

}  // namespace varco
