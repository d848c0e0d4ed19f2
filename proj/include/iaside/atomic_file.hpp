// Copyright 2026 The iaside Authors.
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

#ifndef IASIDE_ATOMIC_FILE_HPP
#define IASIDE_ATOMIC_FILE_HPP

#include <filesystem>
#include <string_view>

namespace iaside {

/// Writes `contents` to a temporary sibling of `path` and renames it into
/// place, so `path` is either the old file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace iaside

#endif  // IASIDE_ATOMIC_FILE_HPP
