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

#include "uot/operators/hash_table.hpp"

#include <bit>
#include <string>

namespace uot {

std::uint64_t HashKeyBytes(std::span<const std::byte> key) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  std::size_t i = 0;
  for (; i + 8 <= key.size(); i += 8) {
    std::uint64_t word;
    std::memcpy(&word, key.data() + i, 8);
    h = Mix64(h ^ word);
  }
  if (i < key.size()) {
    std::uint64_t word = 0;
    std::memcpy(&word, key.data() + i, key.size() - i);
    h = Mix64(h ^ word);
  }
  return h;
}

JoinHashTable::JoinHashTable(SchemaPtr key_schema, SchemaPtr payload_schema,
                             const HashTableOptions &options, MemoryTracker *memory)
    : key_schema_(std::move(key_schema)),
      payload_schema_(std::move(payload_schema)),
      key_width_(key_schema_->tuple_width()),
      payload_width_(payload_schema_ == nullptr ? 0 : payload_schema_->tuple_width()),
      bucket_bytes_(options.bucket_bytes == 0 ? MinBucketBytes(key_width_, payload_width_)
                                              : options.bucket_bytes),
      load_factor_(options.load_factor),
      memory_(memory),
      capacity_(std::bit_ceil(std::max<std::size_t>(options.initial_capacity, 1))) {
  if (bucket_bytes_ < MinBucketBytes(key_width_, payload_width_)) {
    throw Error(ErrorCode::kInvalidSpec,
                "bucket of " + std::to_string(bucket_bytes_) + " bytes cannot hold a " +
                    std::to_string(MinBucketBytes(key_width_, payload_width_)) + "-byte entry");
  }
  if (!(load_factor_ > 0.0 && load_factor_ <= 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "load factor must be in (0, 1]");
  }
  slots_ = AllocateSlots(capacity_);
}

JoinHashTable::~JoinHashTable() {
  if (memory_ != nullptr && slots_ != nullptr) {
    memory_->Release(memory_bytes(), MemoryCategory::kHashTable);
  }
}

std::unique_ptr<std::byte[]> JoinHashTable::AllocateSlots(std::size_t capacity) {
  if (capacity >= kEmpty) {
    throw Error(ErrorCode::kOutOfMemoryBudget, "hash table exceeds 2^32 buckets");
  }
  if (memory_ != nullptr) memory_->Reserve(capacity * bucket_bytes_, MemoryCategory::kHashTable);
  std::unique_ptr<std::byte[]> slots(new std::byte[capacity * bucket_bytes_]);
  for (std::size_t i = 0; i < capacity; ++i) StoreU32(slots.get() + i * bucket_bytes_, kEmpty);
  return slots;
}

void JoinHashTable::GrowLocked(std::size_t needed) {
  std::size_t new_capacity = capacity_;
  while (static_cast<double>(needed) > load_factor_ * static_cast<double>(new_capacity)) {
    new_capacity *= 2;
  }
  if (new_capacity == capacity_) return;

  std::unique_ptr<std::byte[]> fresh = AllocateSlots(new_capacity);
  const std::size_t count = entry_count_.load(std::memory_order_relaxed);
  const std::size_t entry_bytes = key_width_ + payload_width_;
  for (std::size_t i = 0; i < count; ++i) {
    std::byte *dst = fresh.get() + i * bucket_bytes_;
    const std::byte *src = slot(i);
    std::memcpy(dst + kChainSlotBytes, src + kChainSlotBytes, entry_bytes);
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::byte *entry = fresh.get() + i * bucket_bytes_;
    const std::uint64_t hash = HashKeyBytes({entry + kChainSlotBytes, key_width_});
    std::byte *head = fresh.get() + (hash & (new_capacity - 1)) * bucket_bytes_;
    StoreU32(entry + 4, LoadU32(head));
    StoreU32(head, static_cast<std::uint32_t>(i));
  }
  if (memory_ != nullptr) memory_->Release(memory_bytes(), MemoryCategory::kHashTable);
  slots_ = std::move(fresh);
  capacity_ = new_capacity;
  ++resize_count_;
}

void JoinHashTable::Insert(std::span<const std::byte> key, std::span<const std::byte> payload) {
  InsertBatch(key.data(), payload.data(), 1);
}

void JoinHashTable::InsertBatch(const std::byte *keys, const std::byte *payloads,
                                std::size_t count) {
  if (sealed()) throw Error(ErrorCode::kHashTableSealed, "insert into a sealed hash table");
  std::size_t done = 0;
  while (done < count) {
    {
      std::shared_lock<std::shared_mutex> lock(resize_mutex_);
      const double limit = load_factor_ * static_cast<double>(capacity_);
      while (done < count) {
        std::size_t index = entry_count_.load(std::memory_order_relaxed);
        if (static_cast<double>(index + 1) > limit) break;
        if (!entry_count_.compare_exchange_weak(index, index + 1, std::memory_order_acq_rel)) {
          continue;
        }
        const std::byte *key = keys + done * key_width_;
        std::byte *entry = slot(index);
        std::memcpy(entry + kChainSlotBytes, key, key_width_);
        if (payload_width_ > 0) {
          std::memcpy(entry + kChainSlotBytes + key_width_, payloads + done * payload_width_,
                      payload_width_);
        }
        const std::size_t bucket = HashKeyBytes({key, key_width_}) & (capacity_ - 1);
        {
          std::lock_guard<std::mutex> stripe(stripes_[StripeOf(bucket)]);
          std::byte *head = slot(bucket);
          StoreU32(entry + 4, LoadU32(head));
          StoreU32(head, static_cast<std::uint32_t>(index));
        }
        ++done;
      }
    }
    if (done < count) {
      std::unique_lock<std::shared_mutex> lock(resize_mutex_);
      GrowLocked(entry_count_.load(std::memory_order_relaxed) + 1);
    }
  }
}

std::size_t JoinHashTable::CountMatches(std::span<const std::byte> key) const {
  std::size_t n = 0;
  ForEachMatch(key, HashKeyBytes(key), [&n](const std::byte *) { ++n; });
  return n;
}

}  // namespace uot
