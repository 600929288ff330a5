#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twinkit {

using RowIndex = std::size_t;
using IndexSet = std::vector<RowIndex>;

/// Dense row-major matrix of doubles. Rows are points, columns are features.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Rows `ids` gathered in the given order.
  Matrix gather(std::span<const RowIndex> ids) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Numeric table as read from disk, before any scaling.
struct RawTable {
  Matrix values;
  std::vector<std::string> column_names;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
};

enum class ConstantColumnPolicy { reject, zero };

/// Column-standardized data. `values` is what every distance in the library sees.
struct Dataset {
  Matrix values;
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<RowIndex> row_ids;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
};

RawTable load_csv(const std::filesystem::path& path,
                  const std::optional<std::vector<std::string>>& column_selection = std::nullopt);

/// Parses CSV text; `source` is only used in error messages.
RawTable parse_csv(std::string_view text,
                   const std::optional<std::vector<std::string>>& column_selection = std::nullopt,
                   std::string_view source = "<memory>");

/// (x - mean) / sd per column with the N-1 divisor.
Dataset standardize(const RawTable& table,
                    ConstantColumnPolicy policy = ConstantColumnPolicy::reject);

/// Wraps values unchanged (means 0, sds 1). Used for toy and pre-scaled data.
Dataset as_is(const RawTable& table);
Dataset as_is(Matrix values);

/// Writes the header and rows `indices` (ascending) with shortest round-trip formatting.
void write_split_csv(const RawTable& table, std::span<const RowIndex> indices,
                     const std::filesystem::path& path);

std::string format_csv(const RawTable& table, std::span<const RowIndex> indices);

/// Index files: one zero-based row index per line.
IndexSet read_index_file(const std::filesystem::path& path);
std::string format_index_list(std::span<const RowIndex> indices);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace twinkit
