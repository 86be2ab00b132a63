#include "efp/text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "efp/errors.hpp"

namespace efp {
namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::string_view next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  bool at_end() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    return pos_ == text_.size();
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t parse_count(Tokenizer& tok, const char* what) {
  const std::string_view t = tok.next();
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || value == 0) {
    throw FormatError(std::string("expected positive integer for ") + what);
  }
  return value;
}

double parse_double(Tokenizer& tok) {
  const std::string_view t = tok.next();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw FormatError("malformed number '" + std::string(t) + "'");
  }
  return value;
}

void append_scalar(std::string& out, double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, ptr);
}

}  // namespace

std::string format_scalar(double x) {
  std::string s;
  append_scalar(s, x);
  return s;
}

std::string format_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ' ';
      append_scalar(out, row[j]);
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix(std::string_view text) {
  Tokenizer tok(text);
  const std::size_t rows = parse_count(tok, "row count");
  const std::size_t cols = parse_count(tok, "column count");
  std::vector<double> data(rows * cols);
  for (double& x : data) x = parse_double(tok);
  if (!tok.at_end()) throw FormatError("trailing data after matrix");
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const ParameterError& e) {
    throw FormatError(e.what());
  }
}

std::string format_vector(const Vector& v) {
  std::string out = std::to_string(v.size()) + "\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    append_scalar(out, v[i]);
  }
  out += '\n';
  return out;
}

Vector parse_vector(std::string_view text) {
  Tokenizer tok(text);
  const std::size_t len = parse_count(tok, "vector length");
  std::vector<double> data(len);
  for (double& x : data) x = parse_double(tok);
  if (!tok.at_end()) throw FormatError("trailing data after vector");
  try {
    return Vector(std::move(data));
  } catch (const ParameterError& e) {
    throw FormatError(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace efp
