#pragma once

#include <string>

#include "chanent/channel.hpp"

namespace chanent::io {

/// Parses a channel specification:
///   {"name": text, "dim_in": int, "dim_out": int,
///    one of "kraus": [matrix...], "choi": matrix,
///           "standard": {"kind": text, "params": {...}}}
/// A matrix is an array of rows of [re, im] pairs. Standard params are
/// d, d_out, p, probs and sigma (matrix), as each kind requires.
/// Errors are ValidationError with "<source>:<line>: field '<path>': ...".
KrausChannel parse_channel(const std::string& text, const std::string& source = "<input>");

/// Reads and parses a file; unreadable files raise ValidationError.
KrausChannel load_channel(const std::string& path);

/// Kraus-form specification of the channel, pretty-printed.
std::string channel_to_json(const KrausChannel& channel);

}  // namespace chanent::io
