//------------------------------------------------------------------------------
//
//   Copyright 2026 The enbench Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "enbench/tarj.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace enbench {

struct MemoryEntry
{
  int         index = 0;  // day or round
  std::string journal;
  std::string summary;

  bool operator==(MemoryEntry const &) const = default;
};

/// Append-only journal memory owned by one agent. Rendering shows only the
/// most recent `window` entries (0 shows everything).
class MemoryStore
{
public:
  explicit MemoryStore(std::string label = "Round", std::size_t window = 0)
    : label_(std::move(label))
    , window_(window)
  {}

  void append(MemoryEntry entry)
  {
    entries_.push_back(std::move(entry));
  }

  std::vector<MemoryEntry> const &entries() const noexcept
  {
    return entries_;
  }
  std::size_t window() const noexcept
  {
    return window_;
  }
  std::string const &label() const noexcept
  {
    return label_;
  }

  /// One "<label> <index>: <summary>" line per visible entry; "" when empty.
  std::string history_text() const;
  /// One "<label> <index>: <journal>" line per visible entry; "" when empty.
  std::string journal_text() const;

private:
  std::size_t first_visible() const;

  std::string              label_;
  std::size_t              window_;
  std::vector<MemoryEntry> entries_;
};

/// Returns `memory` with the record's journal and the outcome summary appended.
MemoryStore update_memory(MemoryStore memory, TarjRecord const &record, int index,
                          std::string outcome_summary);

}  // namespace enbench
