#pragma once

#include <functional>
#include <string_view>

namespace spinrestore {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the warning sink and returns the previous one. The default sink
/// writes "warning: <msg>" to stderr.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

} // namespace spinrestore
