#include "chanent/channel_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "chanent/errors.hpp"

namespace chanent::io {

using nlohmann::json;

namespace {

/// Line of the first character of every value, keyed by its path
/// ("kraus[0][1]", "standard.params.p"). Assumes syntactically valid JSON.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    skip();
    value("");
  }

  int line_of(const std::string& path) const {
    auto it = lines_.find(path);
    return it == lines_.end() ? 1 : it->second;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    lines_.emplace(path, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip();
        ++pos_;  // ':'
        skip();
        value(path.empty() ? key : path + "." + key);
        skip();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip();
      int k = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(path + "[" + std::to_string(k++) + "]");
        skip();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}') {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const std::string& source, const LineIndex& index) : source_(source), index_(index) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    std::ostringstream os;
    os << source_ << ":" << index_.line_of(path) << ": field '" << (path.empty() ? "<root>" : path)
       << "': " << message;
    throw ValidationError(os.str());
  }

  const json& member(const json& obj, const std::string& path, const std::string& key) const {
    if (!obj.contains(key)) fail(path, "missing required field '" + key + "'");
    return obj.at(key);
  }

  int integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  std::string text(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Matrix matrix(const json& v, const std::string& path) const {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t i = 0; i < rows; ++i) {
      const std::string rp = path + "[" + std::to_string(i) + "]";
      const json& row = v[i];
      if (!row.is_array() || row.empty()) fail(rp, "expected a non-empty row of [re, im] entries");
      if (i == 0) {
        cols = row.size();
        m = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      } else if (row.size() != cols) {
        fail(rp, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
      }
      for (std::size_t j = 0; j < cols; ++j) {
        const std::string ep = rp + "[" + std::to_string(j) + "]";
        const json& e = row[j];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
          fail(ep, "expected a complex entry [re, im]");
        }
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cplx(e[0].get<double>(), e[1].get<double>());
      }
    }
    return m;
  }

 private:
  const std::string& source_;
  const LineIndex& index_;
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

KrausChannel standard_from_json(const Reader& r, const json& spec, const std::string& name) {
  const std::string path = "standard";
  if (!spec.is_object()) r.fail(path, "expected an object with 'kind' and 'params'");
  const std::string kind_name = r.text(r.member(spec, path, "kind"), "standard.kind");
  StandardKind kind;
  try {
    kind = standard_kind_from_string(kind_name);
  } catch (const ValidationError& e) {
    r.fail("standard.kind", e.what());
  }
  StandardParams params;
  const json empty = json::object();
  const json& p = spec.contains("params") ? spec.at("params") : empty;
  if (!p.is_object()) r.fail("standard.params", "expected an object");
  const std::string pp = "standard.params";
  if (p.contains("d")) params.d = r.integer(p.at("d"), pp + ".d");
  if (p.contains("d_out")) params.d_out = r.integer(p.at("d_out"), pp + ".d_out");
  if (p.contains("p")) params.p = r.number(p.at("p"), pp + ".p");
  if (p.contains("probs")) {
    const json& q = p.at("probs");
    if (!q.is_array()) r.fail(pp + ".probs", "expected an array of numbers");
    for (std::size_t i = 0; i < q.size(); ++i) {
      params.probs.push_back(r.number(q[i], pp + ".probs[" + std::to_string(i) + "]"));
    }
    if (!p.contains("d")) params.d = static_cast<int>(params.probs.size());
  }
  if (p.contains("sigma")) {
    params.sigma = r.matrix(p.at("sigma"), pp + ".sigma");
    if (!p.contains("d") && kind != StandardKind::replacer) params.d = static_cast<int>(params.sigma.rows());
  }
  if (kind == StandardKind::replacer && !p.contains("sigma")) r.fail(pp, "replacer needs 'sigma'");
  if (kind == StandardKind::dephasing && !p.contains("probs")) r.fail(pp, "dephasing needs 'probs'");
  try {
    return standard_channel(kind, params).renamed(name);
  } catch (const ValidationError& e) {
    r.fail(pp, e.what());
  }
}

}  // namespace

KrausChannel parse_channel(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n'));
    std::ostringstream os;
    os << source << ":" << line << ": malformed JSON: " << e.what();
    throw ValidationError(os.str());
  }
  const LineIndex index(text);
  const Reader r(source, index);
  if (!doc.is_object()) r.fail("", "expected a JSON object");
  const std::string name = r.text(r.member(doc, "", "name"), "name");
  const int dim_in = r.integer(r.member(doc, "", "dim_in"), "dim_in");
  const int dim_out = r.integer(r.member(doc, "", "dim_out"), "dim_out");
  if (dim_in < 1) r.fail("dim_in", "must be positive");
  if (dim_out < 1) r.fail("dim_out", "must be positive");
  const int present = int(doc.contains("kraus")) + int(doc.contains("choi")) + int(doc.contains("standard"));
  if (present != 1) r.fail("", "exactly one of 'kraus', 'choi' or 'standard' is required");

  KrausChannel channel({Matrix::Identity(1, 1)});
  if (doc.contains("kraus")) {
    const json& ks = doc.at("kraus");
    if (!ks.is_array() || ks.empty()) r.fail("kraus", "expected a non-empty array of matrices");
    std::vector<Matrix> ops;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string path = "kraus[" + std::to_string(i) + "]";
      Matrix k = r.matrix(ks[i], path);
      if (k.rows() != dim_out || k.cols() != dim_in) {
        r.fail(path, "Kraus operator is " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                         ", expected dim_out x dim_in = " + std::to_string(dim_out) + "x" +
                         std::to_string(dim_in));
      }
      ops.push_back(std::move(k));
    }
    channel = KrausChannel(std::move(ops), name);
    const ChannelValidation v = validate_channel(channel);
    if (!v.valid) {
      std::ostringstream os;
      os << "Kraus operators are not trace preserving (defect " << v.tp_defect << ")";
      r.fail("kraus", os.str());
    }
  } else if (doc.contains("choi")) {
    ChoiOperator c;
    c.dim_in = dim_in;
    c.dim_out = dim_out;
    c.gamma_choi = r.matrix(doc.at("choi"), "choi");
    if (c.gamma_choi.rows() != dim_in * dim_out || c.gamma_choi.cols() != dim_in * dim_out) {
      r.fail("choi", "Choi operator must be (dim_in*dim_out) square");
    }
    try {
      channel = choi_to_kraus(c, name);
    } catch (const ValidationError& e) {
      r.fail("choi", e.what());
    }
  } else {
    channel = standard_from_json(r, doc.at("standard"), name);
    if (channel.dim_in() != dim_in || channel.dim_out() != dim_out) {
      r.fail("standard", "channel is " + std::to_string(channel.dim_in()) + "->" +
                             std::to_string(channel.dim_out()) + " but dim_in/dim_out say " +
                             std::to_string(dim_in) + "->" + std::to_string(dim_out));
    }
  }
  return channel;
}

KrausChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open channel file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_channel(buf.str(), path);
}

std::string channel_to_json(const KrausChannel& channel) {
  json doc;
  doc["name"] = channel.name();
  doc["dim_in"] = channel.dim_in();
  doc["dim_out"] = channel.dim_out();
  json ks = json::array();
  for (const Matrix& k : channel.kraus()) ks.push_back(matrix_json(k));
  doc["kraus"] = ks;
  return doc.dump(2);
}

}  // namespace chanent::io
