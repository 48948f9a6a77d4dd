// Copyright 2026 The critrec Authors.
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

#ifndef CRITREC_COMMON_REAL_H_
#define CRITREC_COMMON_REAL_H_

namespace critrec {

// Storage type of every tensor. The default build uses 32-bit floats; the
// float64 twin library exists so gradient checks can use finite differences
// without drowning in rounding noise.
#ifdef CRITREC_REAL_DOUBLE
using Real = double;
#else
using Real = float;
#endif

}  // namespace critrec

#endif  // CRITREC_COMMON_REAL_H_
