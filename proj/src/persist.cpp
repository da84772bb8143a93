#include "mdcs/persist.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mdcs {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint32_t fnv1a32(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::string hex32(std::uint32_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' ||
                         *(end - 1) == '\r')) {
    --end;
  }
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && begin != end;
}

}  // namespace

Dataset load_csv(const std::string& path, double value_lo, double value_hi) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(IoErrorKind::MissingFile, "cannot open '" + path + "'");
  }
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_cols = 0;
  bool first_content_row = true;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      throw IoError(IoErrorKind::Parse,
                    path + ":" + std::to_string(line_no) +
                        ": expected at least one feature and a label column");
    }
    if (first_content_row) {
      // Header auto-detection: a row where not every field parses as a
      // number is treated as the header.
      bool all_numeric = true;
      double tmp;
      for (const auto& f : fields) {
        if (!parse_number(f, tmp)) {
          all_numeric = false;
          break;
        }
      }
      first_content_row = false;
      n_cols = fields.size();
      if (!all_numeric) continue;
    }
    if (fields.size() != n_cols) {
      throw IoError(IoErrorKind::Parse,
                    path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(n_cols) + " columns, found " +
                        std::to_string(fields.size()));
    }
    Point x(n_cols - 1);
    for (std::size_t c = 0; c + 1 < n_cols; ++c) {
      double v;
      if (!parse_number(fields[c], v)) {
        throw IoError(IoErrorKind::Parse,
                      path + ":" + std::to_string(line_no) +
                          ": non-numeric field '" + fields[c] + "'");
      }
      if (v < value_lo || v > value_hi) {
        throw IoError(IoErrorKind::OutOfBounds,
                      path + ":" + std::to_string(line_no) + ": value " +
                          format_double(v) + " outside [" +
                          format_double(value_lo) + ", " +
                          format_double(value_hi) + "]");
      }
      x[c] = v;
    }
    double label_raw;
    if (!parse_number(fields[n_cols - 1], label_raw) ||
        label_raw != std::floor(label_raw) || label_raw < 0) {
      throw IoError(IoErrorKind::Parse,
                    path + ":" + std::to_string(line_no) +
                        ": label column must be a nonnegative integer, got '" +
                        fields[n_cols - 1] + "'");
    }
    data.inputs.push_back(std::move(x));
    data.labels.push_back(static_cast<int>(label_raw));
    max_label = std::max(max_label, static_cast<int>(label_raw));
  }
  if (data.inputs.empty()) {
    throw IoError(IoErrorKind::EmptyDataset,
                  path + ": no data rows found");
  }
  data.n_classes = max_label + 1;
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError(IoErrorKind::MissingFile, "cannot write '" + path + "'");
  }
  const std::size_t dim = data.dim();
  for (std::size_t c = 0; c < dim; ++c) out << "f" << c << ",";
  out << "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      out << format_double(data.inputs[r][c]) << ",";
    }
    out << data.labels[r] << "\n";
  }
}

namespace {

constexpr const char* kModelMagic = "mdcs-model v1";

std::string model_body(const ToyClassifier& model) {
  std::ostringstream out;
  out << kModelMagic << "\n";
  out << "kind " << (model.kind == ClassifierKind::Logistic ? "logistic" : "mlp")
      << "\n";
  out << "activation "
      << (model.activation == Activation::ReLU ? "relu" : "tanh") << "\n";
  out << "n_tensors " << model.weights.size() << "\n";
  for (std::size_t k = 0; k < model.weights.size(); ++k) {
    const Point& w = model.weights[k];
    out << "tensor w" << k;
    for (std::size_t s : w.shape()) out << " " << s;
    out << "\n";
    for (std::size_t i = 0; i < w.size(); ++i) {
      out << format_double(w[i]) << (i + 1 == w.size() ? "\n" : " ");
    }
  }
  return out.str();
}

}  // namespace

void save_model(const ToyClassifier& model, const std::string& path) {
  const std::string body = model_body(model);
  std::ofstream out(path);
  if (!out) {
    throw IoError(IoErrorKind::MissingFile, "cannot write '" + path + "'");
  }
  out << body << "checksum " << hex32(fnv1a32(body)) << "\n";
}

ToyClassifier load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(IoErrorKind::MissingFile, "cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  const std::string marker = "checksum ";
  const auto pos = content.rfind(marker);
  if (pos == std::string::npos) {
    throw IoError(IoErrorKind::BadFormat, path + ": missing checksum line");
  }
  const std::string body = content.substr(0, pos);
  std::string stored = content.substr(pos + marker.size());
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) {
    stored.pop_back();
  }
  if (stored != hex32(fnv1a32(body))) {
    throw IoError(IoErrorKind::ChecksumMismatch,
                  path + ": stored checksum " + stored +
                      " does not match content " + hex32(fnv1a32(body)));
  }

  std::istringstream is(body);
  std::string line;
  if (!std::getline(is, line) || line != kModelMagic) {
    throw IoError(IoErrorKind::BadFormat, path + ": bad magic line");
  }
  ToyClassifier model;
  std::string word, value;
  is >> word >> value;
  if (word != "kind" || (value != "logistic" && value != "mlp")) {
    throw IoError(IoErrorKind::BadFormat, path + ": bad kind line");
  }
  model.kind =
      value == "logistic" ? ClassifierKind::Logistic : ClassifierKind::Mlp;
  is >> word >> value;
  if (word != "activation" || (value != "relu" && value != "tanh")) {
    throw IoError(IoErrorKind::BadFormat, path + ": bad activation line");
  }
  model.activation =
      value == "relu" ? Activation::ReLU : Activation::Tanh;
  std::size_t n_tensors = 0;
  is >> word >> n_tensors;
  if (word != "n_tensors") {
    throw IoError(IoErrorKind::BadFormat, path + ": bad n_tensors line");
  }
  const std::size_t expected =
      model.kind == ClassifierKind::Logistic ? 2u : 4u;
  if (n_tensors != expected) {
    throw IoError(IoErrorKind::BadFormat,
                  path + ": expected " + std::to_string(expected) +
                      " tensors for this kind");
  }
  for (std::size_t k = 0; k < n_tensors; ++k) {
    std::string name;
    is >> word >> name;
    if (word != "tensor") {
      throw IoError(IoErrorKind::BadFormat, path + ": bad tensor header");
    }
    std::getline(is, line);
    std::istringstream shape_in(line);
    std::vector<std::size_t> shape;
    std::size_t s;
    while (shape_in >> s) shape.push_back(s);
    if (shape.empty()) {
      throw IoError(IoErrorKind::BadFormat, path + ": tensor without shape");
    }
    std::size_t total = 1;
    for (std::size_t v : shape) total *= v;
    std::vector<double> values(total);
    for (std::size_t i = 0; i < total; ++i) {
      if (!(is >> values[i])) {
        throw IoError(IoErrorKind::BadFormat,
                      path + ": truncated tensor data");
      }
    }
    model.weights.emplace_back(std::move(values), std::move(shape));
  }
  return model;
}

}  // namespace mdcs
