//
// Copyright 2026 The sibkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SIBKIT_LOG_HPP
#define SIBKIT_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace sibkit {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold comes from the SIBKIT_LOG environment variable
// (error|warn|info|debug); defaults to warn.
inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SIBKIT_LOG");
    if (env == nullptr) return LogLevel::kWarn;
    const std::string_view s(env);
    if (s == "error") return LogLevel::kError;
    if (s == "info") return LogLevel::kInfo;
    if (s == "debug") return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (level > log_threshold()) return;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::cerr << "[sibkit:" << kNames[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace sibkit

#endif  // SIBKIT_LOG_HPP
