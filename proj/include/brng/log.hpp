#pragma once

#include <functional>
#include <string>

namespace brng {

using WarningSink = std::function<void(const std::string&)>;

/// Replace the process-wide warning sink (default: stderr). Pass nullptr to silence.
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace brng
