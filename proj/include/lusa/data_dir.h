// Copyright 2026 The LUSA Authors.
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

#ifndef LUSA_DATA_DIR_H_
#define LUSA_DATA_DIR_H_

#include <filesystem>

namespace lusa {

// Bundled resources and fixtures: $LUSA_DATA_DIR if set, otherwise the
// data/ directory of the source tree the library was built from.
std::filesystem::path default_data_dir();

}  // namespace lusa

#endif  // LUSA_DATA_DIR_H_
