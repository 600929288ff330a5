#include "twinkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "twinkit/error.hpp"

namespace twinkit {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DataError("matrix data size does not match " + std::to_string(rows_) + "x" +
                    std::to_string(cols_));
  }
}

Matrix Matrix::gather(std::span<const RowIndex> ids) const {
  Matrix out(ids.size(), cols_);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto src = row(ids[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

RawTable parse_csv(std::string_view text,
                   const std::optional<std::vector<std::string>>& column_selection,
                   std::string_view source) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (line number, content)
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.emplace_back(line_no, line);
    pos = end + 1;
  }
  const std::string where(source);
  if (lines.empty()) throw DataError(where + ": missing header row");

  std::vector<std::string> header;
  for (auto f : split_fields(lines.front().second)) header.emplace_back(unquote(f));
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!by_name.emplace(header[j], j).second) {
      throw DataError(where + ": duplicate column name '" + header[j] + "'");
    }
  }

  std::vector<std::size_t> picked;
  if (column_selection) {
    if (column_selection->empty()) throw UsageError("column selection is empty");
    std::set<std::string> seen;
    for (const auto& name : *column_selection) {
      if (!seen.insert(name).second) {
        throw UsageError("column '" + name + "' selected more than once");
      }
      auto it = by_name.find(name);
      if (it == by_name.end()) throw DataError(where + ": no column named '" + name + "'");
      picked.push_back(it->second);
    }
  } else {
    for (std::size_t j = 0; j < header.size(); ++j) picked.push_back(j);
  }

  const std::size_t n_rows = lines.size() - 1;
  if (n_rows < 2) throw DataError(where + ": need at least 2 data rows, found " + std::to_string(n_rows));

  Matrix values(n_rows, picked.size());
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto& [ln, line] = lines[i + 1];
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError(where + ": line " + std::to_string(ln) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < picked.size(); ++j) {
      double v = 0.0;
      if (!parse_number(fields[picked[j]], v)) {
        throw DataError(where + ": non-numeric value '" + std::string(fields[picked[j]]) + "' at row " +
                        std::to_string(i) + " (line " + std::to_string(ln) + "), column '" +
                        header[picked[j]] + "'");
      }
      values(i, j) = v;
    }
  }

  RawTable table;
  table.values = std::move(values);
  for (auto j : picked) table.column_names.push_back(header[j]);
  return table;
}

RawTable load_csv(const std::filesystem::path& path,
                  const std::optional<std::vector<std::string>>& column_selection) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return parse_csv(buf.str(), column_selection, path.string());
}

Dataset standardize(const RawTable& table, ConstantColumnPolicy policy) {
  const std::size_t n = table.rows(), d = table.cols();
  if (n < 2) throw DataError("standardize needs at least 2 rows");

  Dataset out;
  out.values = table.values;
  out.means.assign(d, 0.0);
  out.sds.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += table.values(i, j);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = table.values(i, j) - mean;
      ss += dev * dev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    out.means[j] = mean;
    out.sds[j] = sd;
    if (sd == 0.0) {
      if (policy == ConstantColumnPolicy::reject) {
        const auto name = j < table.column_names.size() ? table.column_names[j] : std::to_string(j);
        throw DataError("column '" + name + "' is constant and cannot be standardized");
      }
      for (std::size_t i = 0; i < n; ++i) out.values(i, j) = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) out.values(i, j) = (table.values(i, j) - mean) / sd;
  }
  out.row_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.row_ids[i] = i;
  return out;
}

Dataset as_is(Matrix values) {
  Dataset out;
  const auto n = values.rows(), d = values.cols();
  out.values = std::move(values);
  out.means.assign(d, 0.0);
  out.sds.assign(d, 1.0);
  out.row_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.row_ids[i] = i;
  return out;
}

Dataset as_is(const RawTable& table) { return as_is(table.values); }

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_csv(const RawTable& table, std::span<const RowIndex> indices) {
  std::vector<RowIndex> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DataError("duplicate row index in selection");
  }
  if (!sorted.empty() && sorted.back() >= table.rows()) {
    throw DataError("row index " + std::to_string(sorted.back()) + " out of range for " +
                    std::to_string(table.rows()) + " rows");
  }
  std::string out;
  for (std::size_t j = 0; j < table.column_names.size(); ++j) {
    if (j) out += ',';
    out += table.column_names[j];
  }
  out += '\n';
  for (auto i : sorted) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j) out += ',';
      out += format_double(table.values(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_split_csv(const RawTable& table, std::span<const RowIndex> indices,
                     const std::filesystem::path& path) {
  write_file_atomic(path, format_csv(table, indices));
}

IndexSet read_index_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  IndexSet out;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto s = trim(line);
    if (s.empty()) continue;
    RowIndex v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw DataError(path.string() + ": line " + std::to_string(ln) + " is not a row index: '" +
                      std::string(s) + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_index_list(std::span<const RowIndex> indices) {
  std::string out;
  for (auto i : indices) {
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("error writing '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move temporary file onto '" + path.string() + "'");
  }
}

}  // namespace twinkit
