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

#include <string_view>

// Generated at configure time from the files under assets/.
namespace enbench::assets {

std::string_view battery();
std::string_view battery_icl();
std::string_view battery_blackout_notice();
std::string_view saa_rule_centric();
std::string_view saa_myopic_profit();
std::string_view saa_strategic_outcome();
std::string_view icl_blackout_examples();

}  // namespace enbench::assets
