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

#include "uot/scheduler/uot_policy.hpp"

#include <cctype>
#include <charconv>

#include "uot/common/error.hpp"

namespace uot {

UoTPolicy UoTPolicy::Blocks(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kConfigError, "UoT must be at least one block");
  return UoTPolicy(k, false);
}

UoTPolicy UoTPolicy::Parse(std::string_view text) {
  std::string lower(text);
  for (char &c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "whole" || lower == "whole_table" || lower == "table") {
    return WholeTable();
  }
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size() || k == 0) {
    throw Error(ErrorCode::kConfigError, "bad UoT value '" + std::string(text) + "'");
  }
  return Blocks(k);
}

std::string UoTPolicy::ToString() const {
  return whole_table_ ? "whole" : std::to_string(k_);
}

std::vector<BlockId> TransferGate::OnBlockFilled(BlockId block) {
  pending_.push_back(block);
  std::vector<BlockId> released;
  if (producer_finished_) {
    released.assign(pending_.begin(), pending_.end());
    pending_.clear();
    return released;
  }
  if (policy_.whole_table()) return released;
  while (pending_.size() >= policy_.k_blocks()) {
    for (std::size_t i = 0; i < policy_.k_blocks(); ++i) {
      released.push_back(pending_.front());
      pending_.pop_front();
    }
  }
  return released;
}

std::vector<BlockId> TransferGate::OnProducerFinished() {
  producer_finished_ = true;
  std::vector<BlockId> released(pending_.begin(), pending_.end());
  pending_.clear();
  return released;
}

}  // namespace uot
