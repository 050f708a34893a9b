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
#include "enbench/rng.hpp"

#include <gtest/gtest.h>

using namespace enbench;

TEST(MemoryStore, EmptyStoreRendersNothing)
{
  MemoryStore m("Day", 3);
  EXPECT_EQ(m.history_text(), "");
  EXPECT_EQ(m.journal_text(), "");
}

TEST(MemoryStore, RendersOneLinePerEntryInOrder)
{
  MemoryStore m("Round");
  m.append({1, "j1", "s1"});
  m.append({2, "j2", "s2"});
  EXPECT_EQ(m.history_text(), "\nRound 1: s1\nRound 2: s2");
  EXPECT_EQ(m.journal_text(), "\nRound 1: j1\nRound 2: j2");
}

TEST(MemoryStore, WindowShowsOnlyTheMostRecentEntries)
{
  MemoryStore m("Day", 2);
  for (int d = 1; d <= 5; ++d)
  {
    m.append({d, "j" + std::to_string(d), "s" + std::to_string(d)});
  }
  EXPECT_EQ(m.entries().size(), 5U);
  EXPECT_EQ(m.history_text(), "\nDay 4: s4\nDay 5: s5");
  EXPECT_EQ(m.journal_text(), "\nDay 4: j4\nDay 5: j5");
}

TEST(UpdateMemory, AppendsJournalAndSummaryWithoutTouchingTheInput)
{
  MemoryStore const before("Day", 0);
  TarjRecord        rec;
  rec.journal      = "Keep a reserve.";
  auto const after = update_memory(before, rec, 4, "price $10/kWh, action Hold");
  EXPECT_TRUE(before.entries().empty());
  ASSERT_EQ(after.entries().size(), 1U);
  EXPECT_EQ(after.entries()[0], (MemoryEntry{4, "Keep a reserve.", "price $10/kWh, action Hold"}));
}

// Appending never rewrites earlier entries.
TEST(MemoryProperty, AppendOnly)
{
  Rng         rng(3);
  MemoryStore m("Round", 5);
  std::vector<MemoryEntry> shadow;
  for (int i = 1; i <= 200; ++i)
  {
    MemoryEntry e{i, std::string(uniform_index(rng, 5), 'j'), std::string(uniform_index(rng, 5), 's')};
    TarjRecord rec;
    rec.journal = e.journal;
    m           = update_memory(m, rec, i, e.summary);
    shadow.push_back(e);
    ASSERT_EQ(m.entries(), shadow);
  }
}
