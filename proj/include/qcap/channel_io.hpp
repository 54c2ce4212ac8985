#pragma once

// Channel files: {"din": int, "dout": int, "kraus": [op, ...]} where each op
// is a dout x din nested array of [re, im] pairs.

#include <filesystem>
#include <string>
#include <string_view>

#include "qcap/channels.hpp"

namespace qcap {

/// Throws ParseError (with line and column) on malformed text and
/// ValidationError when the operators do not form a channel.
KrausChannel parse_channel_json(std::string_view text, std::string_view source = "<input>");
KrausChannel read_channel_json(const std::filesystem::path& path);

/// Doubles are written with round-trip precision.
std::string channel_to_json(const KrausChannel& ch);
void write_channel_json(const std::filesystem::path& path, const KrausChannel& ch);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file. Throws std::runtime_error with the path on I/O
/// failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace qcap
