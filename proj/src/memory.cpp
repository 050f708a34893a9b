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

#include "enbench/memory.hpp"

namespace enbench {

std::size_t MemoryStore::first_visible() const
{
  if (window_ == 0 || entries_.size() <= window_)
  {
    return 0;
  }
  return entries_.size() - window_;
}

std::string MemoryStore::history_text() const
{
  std::string out;
  for (auto i = first_visible(); i < entries_.size(); ++i)
  {
    out += "\n" + label_ + " " + std::to_string(entries_[i].index) + ": " + entries_[i].summary;
  }
  return out;
}

std::string MemoryStore::journal_text() const
{
  std::string out;
  for (auto i = first_visible(); i < entries_.size(); ++i)
  {
    out += "\n" + label_ + " " + std::to_string(entries_[i].index) + ": " + entries_[i].journal;
  }
  return out;
}

MemoryStore update_memory(MemoryStore memory, TarjRecord const &record, int index,
                          std::string outcome_summary)
{
  memory.append({index, record.journal, std::move(outcome_summary)});
  return memory;
}

}  // namespace enbench
