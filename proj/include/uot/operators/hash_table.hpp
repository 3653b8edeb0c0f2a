// Copyright 2026 The UoT Engine Authors.
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

#ifndef UOT_OPERATORS_HASH_TABLE_HPP_
#define UOT_OPERATORS_HASH_TABLE_HPP_

#include <array>
#include <cstring>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <vector>

#include "uot/common/error.hpp"
#include "uot/plan/plan_dag.hpp"
#include "uot/storage/memory_tracker.hpp"
#include "uot/storage/types.hpp"

namespace uot {

// splitmix64 finalizer.
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hashes a fixed-width key eight bytes at a time (tail zero-extended).
std::uint64_t HashKeyBytes(std::span<const std::byte> key);

/**
 * @brief Non-partitioned join hash table with fixed-size buckets.
 *
 * Storage is one array of `bucket_capacity()` slots of `bucket_bytes()` each.
 * Slot i holds the chain head of bucket i and, once claimed, entry i:
 *
 *   [head:u32][next:u32][key bytes][payload bytes][padding to bucket_bytes]
 *
 * Entries are claimed densely, so memory is exactly capacity * bucket_bytes.
 * Duplicate keys simply share a chain. The table doubles whenever an insert
 * would push entry_count / capacity above the load factor.
 *
 * Inserts may run concurrently until Seal(); chain links are protected by
 * striped mutexes over bucket ranges and a resize excludes all inserters.
 * After Seal() the table is read-only and lookups take no locks.
 **/
class JoinHashTable {
 public:
  static constexpr std::size_t kChainSlotBytes = 8;
  static constexpr std::size_t kNumStripes = 64;

  JoinHashTable(SchemaPtr key_schema, SchemaPtr payload_schema, const HashTableOptions &options,
                MemoryTracker *memory = nullptr);
  ~JoinHashTable();

  JoinHashTable(const JoinHashTable &) = delete;
  JoinHashTable &operator=(const JoinHashTable &) = delete;

  // Inserts `count` entries; keys and payloads are packed row-major with the
  // key and payload widths. Throws HashTableSealed after Seal() and
  // OutOfMemoryBudget if a resize is refused.
  void InsertBatch(const std::byte *keys, const std::byte *payloads, std::size_t count);
  void Insert(std::span<const std::byte> key, std::span<const std::byte> payload);

  void Seal() { sealed_.store(true, std::memory_order_release); }
  bool sealed() const { return sealed_.load(std::memory_order_acquire); }

  // Calls fn(payload pointer) for every entry whose key equals `key`. Throws
  // ProbeBeforeBuildSealed if the table has not been sealed.
  template <typename Fn>
  void ForEachMatch(std::span<const std::byte> key, std::uint64_t hash, Fn &&fn) const;

  std::size_t CountMatches(std::span<const std::byte> key) const;

  std::size_t entry_count() const { return entry_count_.load(std::memory_order_acquire); }
  std::size_t bucket_capacity() const { return capacity_; }
  std::size_t bucket_bytes() const { return bucket_bytes_; }
  double load_factor() const { return load_factor_; }
  std::size_t memory_bytes() const { return capacity_ * bucket_bytes_; }
  std::size_t resize_count() const { return resize_count_; }
  std::size_t key_width() const { return key_width_; }
  std::size_t payload_width() const { return payload_width_; }
  const SchemaPtr &payload_schema() const { return payload_schema_; }

  // Smallest legal bucket size for the given key and payload widths.
  static std::size_t MinBucketBytes(std::size_t key_width, std::size_t payload_width) {
    return kChainSlotBytes + key_width + payload_width;
  }

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;

  std::byte *slot(std::size_t i) const { return slots_.get() + i * bucket_bytes_; }
  static std::uint32_t LoadU32(const std::byte *p) {
    std::uint32_t v;
    std::memcpy(&v, p, sizeof(v));
    return v;
  }
  static void StoreU32(std::byte *p, std::uint32_t v) { std::memcpy(p, &v, sizeof(v)); }

  std::size_t StripeOf(std::size_t bucket) const {
    return (bucket * kNumStripes) / capacity_;
  }

  // Grows to hold at least `needed` entries. Caller holds resize_mutex_
  // exclusively.
  void GrowLocked(std::size_t needed);
  std::unique_ptr<std::byte[]> AllocateSlots(std::size_t capacity);

  SchemaPtr key_schema_;
  SchemaPtr payload_schema_;
  std::size_t key_width_;
  std::size_t payload_width_;
  std::size_t bucket_bytes_;
  double load_factor_;
  MemoryTracker *memory_;

  std::size_t capacity_;
  std::unique_ptr<std::byte[]> slots_;
  std::atomic<std::size_t> entry_count_{0};
  std::size_t resize_count_ = 0;
  std::atomic<bool> sealed_{false};

  mutable std::shared_mutex resize_mutex_;
  std::array<std::mutex, kNumStripes> stripes_;
};

template <typename Fn>
void JoinHashTable::ForEachMatch(std::span<const std::byte> key, std::uint64_t hash,
                                 Fn &&fn) const {
  if (!sealed()) {
    throw Error(ErrorCode::kProbeBeforeBuildSealed, "hash table probed before it was sealed");
  }
  std::uint32_t index = LoadU32(slot(hash & (capacity_ - 1)));
  while (index != kEmpty) {
    const std::byte *entry = slot(index);
    if (std::memcmp(entry + kChainSlotBytes, key.data(), key_width_) == 0) {
      fn(entry + kChainSlotBytes + key_width_);
    }
    index = LoadU32(entry + 4);
  }
}

}  // namespace uot

#endif  // UOT_OPERATORS_HASH_TABLE_HPP_
