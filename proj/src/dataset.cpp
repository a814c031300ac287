#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "sharp/error.hpp"
#include "sharp/problems.hpp"

namespace sharp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size())
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(field) + "'", line);
  return v;
}

long long parse_index(std::string_view field, std::size_t line) {
  long long v = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size())
    throw ParseError("bad feature index '" + std::string(field) + "'", line);
  return v;
}

Dataset assemble(const std::vector<std::vector<double>>& rows, const std::vector<double>& targets,
                 Index cols) {
  Dataset d;
  d.A = Matrix::Zero(static_cast<Index>(rows.size()), cols);
  d.b.resize(static_cast<Index>(targets.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      d.A(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    d.b(static_cast<Index>(i)) = targets[i];
  }
  return d;
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::size_t width = 0;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const std::string_view view = trim(text);
    if (view.empty()) continue;
    std::vector<double> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = view.find(',', start);
      fields.push_back(parse_number(view.substr(start, comma - start), line));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() < 2) throw ParseError("need at least one feature and a label", line);
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(fields.size()),
                       line);
    targets.push_back(fields.back());
    fields.pop_back();
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw ParseError("no data rows", 0);
  return assemble(rows, targets, static_cast<Index>(width - 1));
}

Dataset parse_libsvm(std::istream& in, std::optional<Index> dimension) {
  if (dimension && *dimension < 1) throw InvalidArgument("dimension must be positive");
  std::vector<std::vector<std::pair<long long, double>>> sparse;
  std::vector<double> targets;
  long long max_index = 0;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    std::string_view view = trim(text);
    if (view.empty()) continue;
    std::vector<std::string_view> tokens;
    while (!view.empty()) {
      const auto space = view.find_first_of(" \t");
      tokens.push_back(view.substr(0, space));
      if (space == std::string_view::npos) break;
      view = trim(view.substr(space));
    }
    targets.push_back(parse_number(tokens.front(), line));
    std::vector<std::pair<long long, double>> entries;
    long long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos)
        throw ParseError("expected idx:val, got '" + std::string(tokens[t]) + "'", line);
      const long long idx = parse_index(tokens[t].substr(0, colon), line);
      if (idx < 1) throw ParseError("feature indices are 1-based", line);
      if (idx <= previous) throw ParseError("feature indices must be strictly increasing", line);
      if (dimension && idx > *dimension)
        throw ParseError("feature index " + std::to_string(idx) + " exceeds dimension " +
                             std::to_string(*dimension),
                         line);
      previous = idx;
      entries.emplace_back(idx, parse_number(tokens[t].substr(colon + 1), line));
    }
    max_index = std::max(max_index, previous);
    sparse.push_back(std::move(entries));
  }
  if (sparse.empty()) throw ParseError("no data rows", 0);
  const Index cols = dimension ? *dimension : static_cast<Index>(max_index);
  if (cols < 1) throw ParseError("no features in any row", 0);
  Dataset d;
  d.A = Matrix::Zero(static_cast<Index>(sparse.size()), cols);
  d.b.resize(static_cast<Index>(targets.size()));
  for (std::size_t i = 0; i < sparse.size(); ++i) {
    for (const auto& [idx, v] : sparse[i]) d.A(static_cast<Index>(i), idx - 1) = v;
    d.b(static_cast<Index>(i)) = targets[i];
  }
  return d;
}

Dataset load_dataset(const std::string& path, DatasetFormat format,
                     std::optional<Index> dimension) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  try {
    return format == DatasetFormat::kCsv ? parse_csv(in) : parse_libsvm(in, dimension);
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

}  // namespace sharp
