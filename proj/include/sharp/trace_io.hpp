#pragma once

#include <iosfwd>
#include <string>

#include "sharp/solvers.hpp"

namespace sharp {

/// CSV with header `iter,f,gap,restart,eps_target`. Numbers use 17
/// significant digits; absent values are empty fields.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// JSON document {"metadata": {...}, "entries": [...]}. `metadata_json` must
/// be a JSON object (or empty); solver statistics are merged into it.
std::string trace_to_json(const Trace& trace, const std::string& metadata_json = {});

/// Writes `content` to `path` through a temporary sibling and a rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace sharp
