// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace delaykit {

/// Collects non-fatal warnings raised while evaluating an approximation
/// outside its comfortable range. Hard precondition violations throw instead.
class Diagnostics {
 public:
  void warn(std::string message) { messages_.push_back(std::move(message)); }

  [[nodiscard]] bool empty() const noexcept { return messages_.empty(); }
  [[nodiscard]] const std::vector<std::string>& messages() const noexcept { return messages_; }

  void merge(const Diagnostics& other) {
    messages_.insert(messages_.end(), other.messages_.begin(), other.messages_.end());
  }

 private:
  std::vector<std::string> messages_;
};

inline void warn_if(Diagnostics* sink, std::string message) {
  if (sink != nullptr) sink->warn(std::move(message));
}

}  // namespace delaykit
