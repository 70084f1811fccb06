#ifndef MIRKIT_DATAIO_HPP_
#define MIRKIT_DATAIO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/sampling.hpp"
#include "mirkit/trainer.hpp"

namespace mirkit {

// Metadata interchange is JSON lines: one object per clip with keys clip_id,
// video_id, t_start, t_end, nouns, verbs, verb_class, noun_class, text.
// Parse errors carry 1-based line numbers.
std::vector<ClipMeta> parse_metadata(const std::filesystem::path& path);
void write_metadata(const std::vector<ClipMeta>& metas,
                    const std::filesystem::path& path);
ClipMeta parse_metadata_line(const std::string& line, std::size_t line_no);

// Binary matrix container, one or more records back to back. Record layout:
//   bytes 0..3   magic "MIRK"
//   bytes 4..7   format version, u32 little-endian (currently 1)
//   bytes 8..11  rows, u32 little-endian
//   bytes 12..15 cols, u32 little-endian
//   then rows*cols IEEE-754 32-bit little-endian values, row-major.
// Values are promoted to 64-bit on read and narrowed on write.
Matrix read_matrix(const std::filesystem::path& path);  // exactly one record
std::vector<Matrix> read_matrices(const std::filesystem::path& path);
void write_matrix(const Matrix& m, const std::filesystem::path& path);
void write_matrices(const std::vector<Matrix>& ms,
                    const std::filesystem::path& path);

EmbeddingMatrix read_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& emb,
                      const std::filesystem::path& path);

// Projection head dump: two records (video weights, text weights).
void write_head(const ProjectionHead& head, const std::filesystem::path& path);
ProjectionHead read_head(const std::filesystem::path& path);

// CSV with optional leading '#' comment lines, a header row of column ids,
// and one id-prefixed row per matrix row. Values use shortest round-trip
// formatting, so write -> read -> write is byte-identical.
struct CsvMatrix {
  Matrix values;
  std::vector<std::string> comments;  // without trailing newline
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
};

CsvMatrix make_csv_matrix(Matrix values, const std::string& row_prefix,
                          const std::string& col_prefix,
                          std::vector<std::string> comments = {});
void write_csv_matrix(const CsvMatrix& csv, const std::filesystem::path& path);
CsvMatrix read_csv_matrix(const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace mirkit

#endif  // MIRKIT_DATAIO_HPP_
