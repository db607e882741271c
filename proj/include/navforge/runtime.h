// Copyright 2026 The NavForge Authors
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

#ifndef NAVFORGE_RUNTIME_H_
#define NAVFORGE_RUNTIME_H_

namespace navforge {

// Keeps large per-minibatch temporaries on the heap instead of fresh mmap
// regions. Training allocates and frees multi-megabyte matrices every
// minibatch; with glibc defaults each one costs page faults. No-op on other
// allocators. Call once at program start.
void tune_allocator();

}  // namespace navforge

#endif  // NAVFORGE_RUNTIME_H_
