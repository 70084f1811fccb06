#include "mirkit/dataio.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mirkit/error.hpp"

namespace mirkit {

namespace {

constexpr char kMagic[4] = {'M', 'I', 'R', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

std::string at_line(std::size_t line_no) {
  return " (line " + std::to_string(line_no) + ")";
}

void put_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {
      static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
      static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<unsigned char> read_all_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

Matrix parse_record(const std::vector<unsigned char>& bytes,
                    std::size_t& offset, const std::filesystem::path& path) {
  if (bytes.size() - offset < 16) {
    throw Error(ErrorKind::TruncatedFile,
                path.string() + ": record header cut short");
  }
  if (std::memcmp(bytes.data() + offset, kMagic, 4) != 0) {
    throw Error(ErrorKind::BadMagic,
                path.string() + ": expected MIRK record magic");
  }
  const std::uint32_t version = get_u32_le(bytes.data() + offset + 4);
  if (version != kFormatVersion) {
    throw Error(ErrorKind::VersionUnsupported,
                path.string() + ": format version " + std::to_string(version));
  }
  const std::uint32_t rows = get_u32_le(bytes.data() + offset + 8);
  const std::uint32_t cols = get_u32_le(bytes.data() + offset + 12);
  offset += 16;
  const std::size_t payload = 4ull * rows * cols;
  if (bytes.size() - offset < payload) {
    throw Error(ErrorKind::TruncatedFile,
                path.string() + ": payload shorter than header claims");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < static_cast<std::size_t>(rows) * cols; ++i) {
    const std::uint32_t raw = get_u32_le(bytes.data() + offset + 4 * i);
    m.data[i] = static_cast<double>(std::bit_cast<float>(raw));
  }
  offset += payload;
  return m;
}

void write_record(std::ostream& out, const Matrix& m) {
  out.write(kMagic, 4);
  put_u32_le(out, kFormatVersion);
  put_u32_le(out, static_cast<std::uint32_t>(m.rows));
  put_u32_le(out, static_cast<std::uint32_t>(m.cols));
  for (double v : m.data) {
    put_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

const nlohmann::json& require_key(const nlohmann::json& obj,
                                  const std::string& key,
                                  std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::MissingKey, "missing '" + key + "'" + at_line(line_no));
  }
  return *it;
}

std::set<int> int_set_field(const nlohmann::json& obj, const std::string& key,
                            std::size_t line_no) {
  const auto& value = require_key(obj, key, line_no);
  if (!value.is_array()) {
    throw Error(ErrorKind::BadType,
                "'" + key + "' must be an integer array" + at_line(line_no));
  }
  std::set<int> out;
  for (const auto& v : value) {
    if (!v.is_number_integer()) {
      throw Error(ErrorKind::BadType,
                  "'" + key + "' must be an integer array" + at_line(line_no));
    }
    out.insert(v.get<int>());
  }
  return out;
}

}  // namespace

ClipMeta parse_metadata_line(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadType,
                std::string("malformed JSON: ") + e.what() + at_line(line_no));
  }
  if (!obj.is_object()) {
    throw Error(ErrorKind::BadType, "expected a JSON object" + at_line(line_no));
  }
  ClipMeta meta;
  const auto str_field = [&](const char* key) {
    const auto& v = require_key(obj, key, line_no);
    if (!v.is_string()) {
      throw Error(ErrorKind::BadType,
                  std::string("'") + key + "' must be a string" + at_line(line_no));
    }
    return v.get<std::string>();
  };
  const auto num_field = [&](const char* key) {
    const auto& v = require_key(obj, key, line_no);
    if (!v.is_number()) {
      throw Error(ErrorKind::BadType,
                  std::string("'") + key + "' must be a number" + at_line(line_no));
    }
    return v.get<double>();
  };
  const auto class_field = [&](const char* key) {
    const auto& v = require_key(obj, key, line_no);
    if (!v.is_number_integer()) {
      throw Error(ErrorKind::BadType,
                  std::string("'") + key + "' must be an integer" + at_line(line_no));
    }
    const int id = v.get<int>();
    if (id < 0) {
      throw Error(ErrorKind::BadType,
                  std::string("'") + key + "' must be >= 0" + at_line(line_no));
    }
    return id;
  };
  meta.clip_id = str_field("clip_id");
  meta.video_id = str_field("video_id");
  meta.t_start = num_field("t_start");
  meta.t_end = num_field("t_end");
  meta.nouns = int_set_field(obj, "nouns", line_no);
  meta.verbs = int_set_field(obj, "verbs", line_no);
  meta.verb_class = class_field("verb_class");
  meta.noun_class = class_field("noun_class");
  meta.text = str_field("text");
  if (!(meta.t_start < meta.t_end)) {
    throw Error(ErrorKind::BadSpan,
                "t_start >= t_end" + at_line(line_no));
  }
  return meta;
}

std::vector<ClipMeta> parse_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::vector<ClipMeta> metas;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    metas.push_back(parse_metadata_line(line, line_no));
  }
  return metas;
}

void write_metadata(const std::vector<ClipMeta>& metas,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  for (const ClipMeta& meta : metas) {
    nlohmann::ordered_json obj;
    obj["clip_id"] = meta.clip_id;
    obj["video_id"] = meta.video_id;
    obj["t_start"] = meta.t_start;
    obj["t_end"] = meta.t_end;
    obj["nouns"] = meta.nouns;
    obj["verbs"] = meta.verbs;
    obj["verb_class"] = meta.verb_class;
    obj["noun_class"] = meta.noun_class;
    obj["text"] = meta.text;
    out << obj.dump() << '\n';
  }
}

std::vector<Matrix> read_matrices(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_all_bytes(path);
  std::vector<Matrix> out;
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    out.push_back(parse_record(bytes, offset, path));
  }
  return out;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::vector<Matrix> ms = read_matrices(path);
  if (ms.size() != 1) {
    throw Error(ErrorKind::FormatError,
                path.string() + ": expected a single matrix record, found " +
                    std::to_string(ms.size()));
  }
  return std::move(ms.front());
}

void write_matrices(const std::vector<Matrix>& ms,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  for (const Matrix& m : ms) write_record(out, m);
  if (!out) {
    throw Error(ErrorKind::IoError, "short write to " + path.string());
  }
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  write_matrices({m}, path);
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  return EmbeddingMatrix::validated(read_matrix(path));
}

void write_embeddings(const EmbeddingMatrix& emb,
                      const std::filesystem::path& path) {
  write_matrix(emb.matrix(), path);
}

void write_head(const ProjectionHead& head,
                const std::filesystem::path& path) {
  write_matrices({head.weight_video, head.weight_text}, path);
}

ProjectionHead read_head(const std::filesystem::path& path) {
  std::vector<Matrix> ms = read_matrices(path);
  if (ms.size() != 2) {
    throw Error(ErrorKind::FormatError,
                path.string() + ": head dump must hold two matrix records");
  }
  return ProjectionHead{std::move(ms[0]), std::move(ms[1])};
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw Error(ErrorKind::FormatError, "double formatting failed");
  }
  return std::string(buf, ptr);
}

CsvMatrix make_csv_matrix(Matrix values, const std::string& row_prefix,
                          const std::string& col_prefix,
                          std::vector<std::string> comments) {
  CsvMatrix csv;
  csv.comments = std::move(comments);
  csv.row_ids.reserve(values.rows);
  csv.col_ids.reserve(values.cols);
  for (std::size_t r = 0; r < values.rows; ++r) {
    csv.row_ids.push_back(row_prefix + std::to_string(r));
  }
  for (std::size_t c = 0; c < values.cols; ++c) {
    csv.col_ids.push_back(col_prefix + std::to_string(c));
  }
  csv.values = std::move(values);
  return csv;
}

void write_csv_matrix(const CsvMatrix& csv,
                      const std::filesystem::path& path) {
  if (csv.row_ids.size() != csv.values.rows ||
      csv.col_ids.size() != csv.values.cols) {
    throw Error(ErrorKind::ShapeMismatch, "CSV ids and matrix shape disagree");
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  for (const std::string& c : csv.comments) out << "# " << c << '\n';
  for (const std::string& id : csv.col_ids) out << ',' << id;
  out << '\n';
  for (std::size_t r = 0; r < csv.values.rows; ++r) {
    out << csv.row_ids[r];
    for (std::size_t c = 0; c < csv.values.cols; ++c) {
      out << ',' << format_double(csv.values.at(r, c));
    }
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::IoError, "short write to " + path.string());
  }
}

CsvMatrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  CsvMatrix csv;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen && line.size() >= 1 && line[0] == '#') {
      std::string comment = line.substr(1);
      if (!comment.empty() && comment.front() == ' ') comment.erase(0, 1);
      csv.comments.push_back(comment);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (!header_seen) {
      header_seen = true;
      if (cells.empty() || !cells.front().empty()) {
        throw Error(ErrorKind::FormatError,
                    "CSV header must start with an empty cell" + at_line(line_no));
      }
      csv.col_ids.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != csv.col_ids.size() + 1) {
      throw Error(ErrorKind::FormatError,
                  "CSV row width disagrees with header" + at_line(line_no));
    }
    csv.row_ids.push_back(cells.front());
    std::vector<double> values;
    values.reserve(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0.0;
      const char* begin = cells[i].data();
      const char* end = begin + cells[i].size();
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::BadType,
                    "CSV cell '" + cells[i] + "' is not a number" +
                        at_line(line_no));
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (!header_seen) {
    throw Error(ErrorKind::FormatError, path.string() + ": no CSV header row");
  }
  csv.values = Matrix(rows.size(), csv.col_ids.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < csv.col_ids.size(); ++c) {
      csv.values.at(r, c) = rows[r][c];
    }
  }
  return csv;
}

}  // namespace mirkit
