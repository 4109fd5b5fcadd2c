// Copyright 2026 The ieobs Authors
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

#ifndef IEOBS_VERSION_HPP_
#define IEOBS_VERSION_HPP_

#define IEOBS_VERSION_MAJOR 1
#define IEOBS_VERSION_MINOR 0
#define IEOBS_VERSION_PATCH 0

#define IEOBS_VERSION_STRING "1.0.0"

namespace ieobs
{

inline const char * version_string() { return IEOBS_VERSION_STRING; }

}  // namespace ieobs

#endif  // IEOBS_VERSION_HPP_
