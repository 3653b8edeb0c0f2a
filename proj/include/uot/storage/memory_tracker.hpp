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

#ifndef UOT_STORAGE_MEMORY_TRACKER_HPP_
#define UOT_STORAGE_MEMORY_TRACKER_HPP_

#include <atomic>
#include <cstddef>

namespace uot {

enum class MemoryCategory { kBaseTable, kTemporaryBlock, kHashTable, kAggregateState };

// Byte accounting for every engine allocation. The buffer cap covers all
// categories; the intermediate high-water mark covers everything except base
// tables.
class MemoryTracker {
 public:
  // A cap of 0 means unlimited.
  explicit MemoryTracker(std::size_t cap_bytes = 0) : cap_bytes_(cap_bytes) {}

  MemoryTracker(const MemoryTracker &) = delete;
  MemoryTracker &operator=(const MemoryTracker &) = delete;

  // Throws OutOfMemoryBudget if the cap would be exceeded.
  void Reserve(std::size_t bytes, MemoryCategory category);
  void Release(std::size_t bytes, MemoryCategory category);

  std::size_t cap_bytes() const { return cap_bytes_; }
  void set_cap_bytes(std::size_t cap) { cap_bytes_ = cap; }

  std::size_t total_bytes() const { return total_.load(std::memory_order_relaxed); }
  std::size_t intermediate_bytes() const { return intermediate_.load(std::memory_order_relaxed); }
  std::size_t peak_intermediate_bytes() const { return peak_intermediate_.load(std::memory_order_relaxed); }
  std::size_t hash_table_bytes() const { return hash_tables_.load(std::memory_order_relaxed); }

  // Restarts the high-water mark from the current live intermediate bytes.
  void ResetPeak() { peak_intermediate_.store(intermediate_.load()); }

 private:
  std::size_t cap_bytes_;
  std::atomic<std::size_t> total_{0};
  std::atomic<std::size_t> intermediate_{0};
  std::atomic<std::size_t> peak_intermediate_{0};
  std::atomic<std::size_t> hash_tables_{0};
};

}  // namespace uot

#endif  // UOT_STORAGE_MEMORY_TRACKER_HPP_
