#pragma once

#include "qfl/program.hpp"

#include <string>
#include <string_view>

namespace qfl {

/// Parses a program in the supported OpenQASM-2-style subset. Statement ids
/// are assigned 0..N-1 in source order; comments (`//`) and blank lines are
/// ignored and do not affect ids. Throws ParseError on any violation.
Program parse(std::string_view source, std::optional<std::string> source_path = std::nullopt);

/// Reads and parses a file; the program's source_path records the path.
Program parse_file(const std::string& path);

} // namespace qfl
