#pragma once

#include <functional>
#include <string>

namespace trigamma {

using WarningSink = std::function<void(const std::string&)>;

// Non-fatal conditions (dropped partial bins, empty inputs) are reported here.
// The default sink writes "warning: ..." to std::clog.
void warn(const std::string& message);

// Installs a new sink and returns the previous one. Passing nullptr restores the default.
WarningSink set_warning_sink(WarningSink sink);

// Collects warnings for the lifetime of the object.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::string& text() const { return text_; }
  int count() const { return count_; }

 private:
  WarningSink previous_;
  std::string text_;
  int count_ = 0;
};

}  // namespace trigamma
