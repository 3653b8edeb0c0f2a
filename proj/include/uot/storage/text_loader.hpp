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

#ifndef UOT_STORAGE_TEXT_LOADER_HPP_
#define UOT_STORAGE_TEXT_LOADER_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "uot/storage/types.hpp"

namespace uot {

// Parses one tuple per line, fields separated by `delimiter`. A trailing
// delimiter at end of line (TPC-H dbgen style) is accepted. Empty lines are
// skipped.
std::vector<Tuple> ParseDelimited(std::istream &in, const Schema &schema, char delimiter = '|');
Tuple ParseDelimitedLine(const std::string &line, const Schema &schema, char delimiter = '|');

void WriteDelimited(std::ostream &out, const Schema &schema, const std::vector<Tuple> &tuples,
                    char delimiter = '|');

}  // namespace uot

#endif  // UOT_STORAGE_TEXT_LOADER_HPP_
