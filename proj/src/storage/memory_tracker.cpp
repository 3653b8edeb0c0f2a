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

#include "uot/storage/memory_tracker.hpp"

#include <string>

#include "uot/common/error.hpp"

namespace uot {

void MemoryTracker::Reserve(std::size_t bytes, MemoryCategory category) {
  std::size_t current = total_.load(std::memory_order_relaxed);
  while (true) {
    if (cap_bytes_ != 0 && current + bytes > cap_bytes_) {
      throw Error(ErrorCode::kOutOfMemoryBudget,
                  "allocating " + std::to_string(bytes) + " bytes exceeds the buffer cap of " +
                      std::to_string(cap_bytes_) + " (in use: " + std::to_string(current) + ")");
    }
    if (total_.compare_exchange_weak(current, current + bytes, std::memory_order_relaxed)) break;
  }
  if (category == MemoryCategory::kBaseTable) return;
  if (category == MemoryCategory::kHashTable) {
    hash_tables_.fetch_add(bytes, std::memory_order_relaxed);
  }
  const std::size_t now = intermediate_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
  std::size_t peak = peak_intermediate_.load(std::memory_order_relaxed);
  while (now > peak &&
         !peak_intermediate_.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

void MemoryTracker::Release(std::size_t bytes, MemoryCategory category) {
  total_.fetch_sub(bytes, std::memory_order_relaxed);
  if (category == MemoryCategory::kBaseTable) return;
  if (category == MemoryCategory::kHashTable) {
    hash_tables_.fetch_sub(bytes, std::memory_order_relaxed);
  }
  intermediate_.fetch_sub(bytes, std::memory_order_relaxed);
}

}  // namespace uot
