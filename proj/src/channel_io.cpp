#include "qcap/channel_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

using nlohmann::json;

std::string location(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream out;
  out << "line " << line << ", column " << column;
  return out.str();
}

[[noreturn]] void fail(std::string_view source, const std::string& what) {
  throw ParseError(std::string(source) + ": " + what);
}

Index read_dim(const json& doc, const char* key, std::string_view source) {
  if (!doc.contains(key)) fail(source, std::string("missing key \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > kMaxDimension) {
    fail(source, std::string("\"") + key + "\" must be an integer in [1, " + std::to_string(kMaxDimension) + "]");
  }
  return static_cast<Index>(v.get<long long>());
}

}  // namespace

KrausChannel parse_channel_json(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    fail(source, "invalid JSON at " + location(text, at) + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "top level must be an object");
  const Index din = read_dim(doc, "din", source);
  const Index dout = read_dim(doc, "dout", source);
  if (!doc.contains("kraus") || !doc.at("kraus").is_array() || doc.at("kraus").empty()) {
    fail(source, "\"kraus\" must be a nonempty array of operators");
  }
  std::vector<ComplexMatrix> ops;
  const json& list = doc.at("kraus");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "kraus[" + std::to_string(k) + "]";
    const json& op = list[k];
    if (!op.is_array() || op.size() != static_cast<std::size_t>(dout)) {
      fail(source, where + " must have " + std::to_string(dout) + " rows");
    }
    ComplexMatrix m(dout, din);
    for (Index r = 0; r < dout; ++r) {
      const json& row = op[r];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(din)) {
        fail(source, where + "[" + std::to_string(r) + "] must have " + std::to_string(din) + " entries");
      }
      for (Index c = 0; c < din; ++c) {
        const json& z = row[c];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          fail(source, where + "[" + std::to_string(r) + "][" + std::to_string(c) + "] must be a [re, im] pair");
        }
        m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    require_finite(m, "channel file");
    ops.push_back(std::move(m));
  }
  return KrausChannel(din, dout, std::move(ops));
}

KrausChannel read_channel_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_json(buf.str(), path.string());
}

std::string channel_to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const ComplexMatrix& m : ch.ops()) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  json doc;
  doc["din"] = ch.din();
  doc["dout"] = ch.dout();
  doc["kraus"] = std::move(ops);
  return doc.dump() + "\n";
}

void write_channel_json(const std::filesystem::path& path, const KrausChannel& ch) {
  write_file_atomic(path, channel_to_json(ch));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace qcap
