#pragma once

#include <iostream>
#include <mutex>
#include <string>

namespace claw::support::log {

inline std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

inline void emit(const char* level, const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex());
  std::cerr << "[claw:" << level << "] " << msg << "\n";
}

inline void info(const std::string& msg) { emit("info", msg); }
inline void warn(const std::string& msg) { emit("warn", msg); }

}  // namespace claw::support::log
