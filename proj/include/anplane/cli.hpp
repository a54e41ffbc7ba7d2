//------------------------------------------------------------------------------
//
//   Copyright 2026 The anplane Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace anplane {

/// Runs the `an` command line. Returns 0 on success, 1 on usage errors, 2 on
/// data errors and 3 when `selfcheck` finds a failing check.
int cli_dispatch(int argc, char const *const *argv, std::ostream &out, std::ostream &err);
int cli_dispatch(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

}  // namespace anplane
