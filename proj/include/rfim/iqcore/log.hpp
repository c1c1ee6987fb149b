#pragma once

#include <functional>
#include <string>

namespace rfim {

using WarningSink = std::function<void(const std::string&)>;

/// Emits a diagnostic through the installed sink (stderr by default).
void warn(const std::string& message);

/// Replaces the warning sink; returns the previous one.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace rfim
