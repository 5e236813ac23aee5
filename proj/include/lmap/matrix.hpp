#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmap {

enum class MatrixKind { similarity, distance };

/// Dense symmetric n x n matrix over a list of paper ids, row-major.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;
  PairwiseMatrix(std::vector<std::string> ids, MatrixKind kind)
      : ids_(std::move(ids)), kind_(kind), values_(ids_.size() * ids_.size(), 0.0) {}

  std::size_t size() const noexcept { return ids_.size(); }
  MatrixKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * size() + j]; }
  void set_symmetric(std::size_t i, std::size_t j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * size(), size()}; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  std::vector<std::string> ids_;
  MatrixKind kind_ = MatrixKind::similarity;
  std::vector<double> values_;
};

/// Upper-triangle triples "id_i<TAB>id_j<TAB>value" (i < j), 12 significant
/// digits. `header`, when non-empty, is written first as a '#' line.
void write_triples(const PairwiseMatrix& m, std::ostream& out, std::string_view header = {});

/// "LMS1", u64 n, ids (u32 length + bytes), n*n little-endian doubles.
void write_matrix_binary(const PairwiseMatrix& m, std::ostream& out);
PairwiseMatrix read_matrix_binary(std::istream& in, MatrixKind kind);
void save_matrix(const PairwiseMatrix& m, const std::filesystem::path& path);
PairwiseMatrix load_matrix(const std::filesystem::path& path, MatrixKind kind);

}  // namespace lmap
