#pragma once

#include <istream>
#include <string>

#include "critshuffle/multivariate.hpp"

namespace critshuffle {

// Declarative channel format, one `key = value` per line, `#` comments:
//
//   alphabet  = a b c d
//   mode      = single | two
//   dominant0 = a          (single)   or   dominant0 = a b   (two)
//   dominant1 = b                          dominant1 = c d
//   split0    = 0.3        (two only, share of the first listed output)
//   split1    = 0.6
//   alpha0    = c:1.0 d:0.5
//   alpha1    = a:0.25
//   pi        = 0.5
//
// Unlisted intensities are zero. Errors carry the offending line number.
ChannelSpec parse_channel_spec(std::istream& in);
ChannelSpec parse_channel_spec_string(const std::string& text);
ChannelSpec load_channel_spec(const std::string& path);

std::string format_channel_spec(const ChannelSpec& spec);

}  // namespace critshuffle
