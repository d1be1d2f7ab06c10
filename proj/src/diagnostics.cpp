#include "trigamma/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace trigamma {
namespace {

std::mutex sink_mutex;

void default_sink(const std::string& message) { std::clog << "warning: " << message << '\n'; }

WarningSink& current_sink() {
  static WarningSink sink = default_sink;
  return sink;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(sink_mutex);
  current_sink()(message);
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex);
  WarningSink previous = std::move(current_sink());
  current_sink() = sink ? std::move(sink) : WarningSink(default_sink);
  return previous;
}

ScopedWarningCapture::ScopedWarningCapture() {
  previous_ = set_warning_sink([this](const std::string& m) {
    text_ += m;
    text_ += '\n';
    ++count_;
  });
}

ScopedWarningCapture::~ScopedWarningCapture() { set_warning_sink(std::move(previous_)); }

}  // namespace trigamma
