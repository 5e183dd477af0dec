#pragma once

#include <string_view>

namespace caif {

// Shell-style glob: '*' matches any run, '?' one character, and
// '{a,b,...}' any one of the comma-separated alternatives (not nested).
bool glob_match(std::string_view pattern, std::string_view text);

}  // namespace caif
