#include "lmap/matrix.hpp"

#include <fstream>

#include <fmt/format.h>

#include "binary_io.hpp"

namespace lmap {

void write_triples(const PairwiseMatrix& m, std::ostream& out, std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  const auto& ids = m.ids();
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < m.size(); ++i) {
    buf.clear();
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      fmt::format_to(std::back_inserter(buf), "{}\t{}\t{:.12g}\n", ids[i], ids[j], m(i, j));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_matrix_binary(const PairwiseMatrix& m, std::ostream& out) {
  out.write("LMS1", 4);
  detail::write_le<std::uint64_t>(out, m.size());
  for (const auto& id : m.ids()) detail::write_string(out, id);
  detail::write_le_array<double>(out, m.values());
}

PairwiseMatrix read_matrix_binary(std::istream& in, MatrixKind kind) {
  detail::expect_magic(in, "LMS1");
  auto n = detail::read_le<std::uint64_t>(in, "matrix size");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) ids.push_back(detail::read_string(in, "id"));
  PairwiseMatrix m(std::move(ids), kind);
  detail::read_le_array<double>(in, m.values(), "matrix values");
  return m;
}

void save_matrix(const PairwiseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write matrix '" + path.string() + "'");
  write_matrix_binary(m, out);
  if (!out) throw DataError("failed writing matrix '" + path.string() + "'");
}

PairwiseMatrix load_matrix(const std::filesystem::path& path, MatrixKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read matrix '" + path.string() + "'");
  return read_matrix_binary(in, kind);
}

}  // namespace lmap
