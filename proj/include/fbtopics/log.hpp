#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fbtopics::log {

using Sink = std::function<void(std::string_view level, std::string_view message)>;

// Replaces the process-wide sink and returns the previous one. The default
// sink writes "[level] message" lines to stderr. Calls are serialized.
Sink set_sink(Sink sink);

void warn(std::string_view message);
void info(std::string_view message);

/// Collects warnings emitted while alive; restores the previous sink on exit.
class ScopedCapture {
 public:
  ScopedCapture();
  ~ScopedCapture();
  ScopedCapture(const ScopedCapture&) = delete;
  ScopedCapture& operator=(const ScopedCapture&) = delete;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Sink previous_;
  std::vector<std::string> warnings_;
};

}  // namespace fbtopics::log
