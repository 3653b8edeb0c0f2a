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

#ifndef UOT_SCHEDULER_UOT_POLICY_HPP_
#define UOT_SCHEDULER_UOT_POLICY_HPP_

#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "uot/storage/types.hpp"

namespace uot {

// Granularity of producer-to-consumer transfer: k sealed blocks at a time, or
// the producer's whole output once it finishes.
class UoTPolicy {
 public:
  static UoTPolicy Blocks(std::size_t k);
  static UoTPolicy WholeTable() { return UoTPolicy(0, true); }
  // "whole" / "WHOLE_TABLE" / a positive integer.
  static UoTPolicy Parse(std::string_view text);

  bool whole_table() const { return whole_table_; }
  std::size_t k_blocks() const { return k_; }
  std::string ToString() const;

  bool operator==(const UoTPolicy &other) const = default;

 private:
  UoTPolicy(std::size_t k, bool whole) : k_(k), whole_table_(whole) {}
  std::size_t k_;
  bool whole_table_;
};

/**
 * @brief Applies a UoT policy to one streamable edge.
 *
 * Blocks accumulate until k of them are pending, at which point exactly k are
 * released (batch semantics: the threshold restarts after each release).
 * Under WholeTable nothing is released until the producer finishes. When the
 * producer finishes, whatever is left goes out regardless of k.
 **/
class TransferGate {
 public:
  explicit TransferGate(UoTPolicy policy) : policy_(policy) {}

  std::vector<BlockId> OnBlockFilled(BlockId block);
  std::vector<BlockId> OnProducerFinished();

  std::size_t pending() const { return pending_.size(); }
  bool producer_finished() const { return producer_finished_; }

 private:
  UoTPolicy policy_;
  std::deque<BlockId> pending_;
  bool producer_finished_ = false;
};

}  // namespace uot

#endif  // UOT_SCHEDULER_UOT_POLICY_HPP_
