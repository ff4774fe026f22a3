// SPDX-License-Identifier: Apache-2.0
//
// pasrad - two-channel passive radar detection simulator
// Copyright (C) 2026 The pasrad authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <ostream>

namespace pasrad
{

// Exit codes of the command-line front end.
enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1, // failed self-test identity or unexpected runtime error
    exit_config = 2,  // invalid arguments, config or threshold file
    exit_guard = 3,   // n_trials * pfa below the quantile guard
};

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pasrad
