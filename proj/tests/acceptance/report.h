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


#ifndef NAVFORGE_TESTS_ACCEPTANCE_REPORT_H_
#define NAVFORGE_TESTS_ACCEPTANCE_REPORT_H_

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

namespace navforge::acceptance {

// One line per criterion: "PASS [n] name (seconds): detail".
class Report {
 public:
  // `fn` returns true on success and may fill `detail`. Exceptions count as
  // failures.
  void run(int id, const std::string& name,
           const std::function<bool(std::string&)>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("%s [%d] %s (%.1f s): %s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    failures_ += ok ? 0 : 1;
  }

  int exit_code() const { return failures_ == 0 ? 0 : 1; }

 private:
  int failures_ = 0;
};

// printf into a std::string.
template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace navforge::acceptance

#endif  // NAVFORGE_TESTS_ACCEPTANCE_REPORT_H_
